import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from seriesreal.errors import AlphabetError, FormatError, TruncationError
from seriesreal.series import (
    TruncatedSeries,
    evaluate,
    format_scalar,
    indicator_series,
    left_shift,
    linear_combine,
    right_shift,
    tabulate,
    to_scalar,
)

AB = ("a", "b")


def all_words(letters, n):
    return [w for k in range(n + 1) for w in itertools.product(letters, repeat=k)]


def random_series(seed, n=4, letters=AB):
    rng = random.Random(seed)
    return tabulate(letters, lambda w: Fraction(rng.randint(-5, 5), rng.randint(1, 4)), n)


def test_scalars():
    assert to_scalar("3/6") == Fraction(1, 2)
    assert to_scalar(4) == 4
    assert format_scalar(Fraction(-2, 4)) == "-1/2"
    assert format_scalar(3) == "3/1"
    for bad in ("0.5", 0.5, "1e3", "x"):
        with pytest.raises(FormatError):
            to_scalar(bad)


def test_canonical_sparse_form():
    p = TruncatedSeries.simple(AB, 2, {("a",): 0, ("b",): "2/4"})
    assert p.table == {("b",): Fraction(1, 2)}
    with pytest.raises(TruncationError):
        TruncatedSeries.simple(AB, 1, {("a", "a"): 1})
    with pytest.raises(AlphabetError):
        TruncatedSeries.simple(AB, 2, {("c",): 1})


def test_evaluate_examples():
    zero = TruncatedSeries.simple(AB, 3)
    assert all(evaluate(zero, w) == 0 for w in all_words(AB, 3))
    eps = indicator_series(AB, lambda w: w == (), 3)
    assert evaluate(eps, ()) == 1
    assert all(evaluate(eps, w) == 0 for w in all_words(AB, 3) if w)


def test_evaluate_beyond_truncation_is_an_error():
    p = TruncatedSeries.simple(AB, 2)
    with pytest.raises(TruncationError):
        evaluate(p, ("a", "a", "a"))
    with pytest.raises(AlphabetError):
        evaluate(p, ("z",))


def test_right_shift_examples():
    p = random_series(0)
    assert right_shift(p, ()) == p
    uv = indicator_series(AB, lambda w: w == ("a", "b", "b"), 4)
    assert right_shift(uv, ("b", "b"))(("a",)) == 1
    # geometric series: shifting by a halves every coefficient
    geo = tabulate(("a",), lambda w: Fraction(1, 2) ** len(w), 4)
    shifted = right_shift(geo, ("a",))
    assert shifted.truncation == 3
    for k in range(4):
        assert shifted(("a",) * k) == Fraction(1, 2) * geo(("a",) * k)
    with pytest.raises(TruncationError):
        right_shift(geo, ("a",) * 5)


def test_left_shift_examples():
    p = random_series(1)
    assert left_shift(p, ()) == p
    uv = indicator_series(AB, lambda w: w == ("a", "b", "b"), 4)
    assert left_shift(uv, ("a",))(("b", "b")) == 1
    assert left_shift(uv, ("a",)).truncation == 3


@pytest.mark.parametrize("seed", range(5))
def test_shifts_commute(seed):
    p = random_series(seed)
    for g in all_words(AB, 2):
        for h in all_words(AB, 2):
            lhs = left_shift(right_shift(p, h), g)
            rhs = right_shift(left_shift(p, g), h)
            assert lhs == rhs


@pytest.mark.parametrize("seed", range(3))
def test_right_shift_composition(seed):
    p = random_series(seed)
    for g in all_words(AB, 4):
        for h in all_words(AB, 4 - len(g)):
            assert right_shift(right_shift(p, h), g) == right_shift(p, g + h)
            # direct check of the definition on every remaining word
            q = right_shift(right_shift(p, h), g)
            for k in all_words(AB, q.truncation):
                assert q(k) == p(k + g + h)


@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(0, 50))
@settings(max_examples=30)
def test_shifts_linear(alpha, beta, seed):
    p, q = random_series(seed), random_series(seed + 1)
    for h in [(), ("a",), ("b", "a")]:
        for shift in (right_shift, left_shift):
            lhs = shift(linear_combine([alpha, beta], [p, q]), h)
            rhs = linear_combine([alpha, beta], [shift(p, h), shift(q, h)])
            assert lhs == rhs


def test_indicator_examples():
    ones = indicator_series(AB, lambda w: True, 2)
    assert all(ones(w) == 1 for w in all_words(AB, 2))
    assert indicator_series(AB, lambda w: False, 2).table == {}
    even = indicator_series(AB, lambda w: w.count("a") % 2 == 0, 2)
    expected = {(): 1, ("a",): 0, ("b",): 1, ("a", "a"): 1, ("a", "b"): 0, ("b", "a"): 0, ("b", "b"): 1}
    assert {w: even(w) for w in all_words(AB, 2)} == expected


def test_linear_combine_examples():
    p, q = random_series(3), random_series(4)
    assert linear_combine([1, 0], [p, q]) == p
    assert (p - p).table == {}
    half = linear_combine([Fraction(1, 2), Fraction(1, 2)], [p, q])
    for w in all_words(AB, 4):
        assert half(w) == (p(w) + q(w)) / 2


def test_linear_combine_errors():
    p = random_series(0)
    with pytest.raises(ValueError):
        linear_combine([1], [p, p])
    with pytest.raises(AlphabetError):
        linear_combine([1, 1], [p, random_series(0, letters=("x", "y"))])
    assert linear_combine([1, 1], [p, p.restrict(2)]).truncation == 2
