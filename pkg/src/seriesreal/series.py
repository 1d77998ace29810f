"""Truncated formal series with exact rational coefficients."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Mapping, Sequence

from .errors import AlphabetError, FormatError, TruncationError
from .events import Alphabet, Word, words_upto

SeriesOracle = Callable[[tuple], object]


def to_scalar(value) -> Fraction:
    """Coerce ints, Fractions and ``"num/den"`` strings to an exact Fraction.

    Floats are rejected: series coefficients must be exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        return Fraction(int(value))
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if any(ch in text for ch in ".eE"):
            raise FormatError(f"coefficient {value!r} is not an exact rational")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise FormatError(f"cannot parse coefficient {value!r}") from None
    raise FormatError(f"coefficient {value!r} of type {type(value).__name__} is not exact")


def format_scalar(value: Fraction) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def _key(word) -> tuple:
    if isinstance(word, Word):
        return word.events
    return tuple(word)


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """Coefficients of a formal series on every word of length <= truncation.

    ``letters`` fixes the input alphabet and its order: Events for a labeled
    series (``alphabet`` is then set) or generator names for a simple one.
    The table is sparse; missing words have coefficient zero.
    """

    letters: tuple
    truncation: int
    table: Mapping[tuple, Fraction]
    alphabet: Alphabet | None = None

    def __post_init__(self):
        if self.truncation < 0:
            raise ValueError("truncation must be >= 0")
        letters = tuple(self.letters)
        allowed = set(letters)
        table = {}
        for word, coeff in self.table.items():
            word = _key(word)
            if len(word) > self.truncation:
                raise TruncationError(len(word), self.truncation)
            for letter in word:
                if letter not in allowed:
                    raise AlphabetError(f"letter {letter!r} not in series alphabet")
            coeff = to_scalar(coeff)
            if coeff != 0:
                table[word] = coeff
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "table", table)

    @classmethod
    def labeled(cls, alphabet: Alphabet, truncation: int, table=None) -> "TruncatedSeries":
        return cls(alphabet.events, truncation, table or {}, alphabet)

    @classmethod
    def simple(cls, generators: Sequence[str], truncation: int, table=None) -> "TruncatedSeries":
        return cls(tuple(generators), truncation, table or {})

    @classmethod
    def zero_like(cls, p: "TruncatedSeries", truncation: int | None = None) -> "TruncatedSeries":
        return cls(p.letters, p.truncation if truncation is None else truncation, {}, p.alphabet)

    @property
    def is_labeled(self) -> bool:
        return self.alphabet is not None

    def same_space(self, other: "TruncatedSeries") -> bool:
        return self.letters == other.letters and self.alphabet == other.alphabet

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.same_space(other)
            and self.truncation == other.truncation
            and self.table == other.table
        )

    __hash__ = None

    def __call__(self, word) -> Fraction:
        return evaluate(self, word)

    def __repr__(self):
        kind = "labeled" if self.is_labeled else "simple"
        return f"TruncatedSeries({kind}, letters={len(self.letters)}, N={self.truncation}, nnz={len(self.table)})"

    def words(self):
        """Every word of the domain, in length-lex order."""
        return words_upto(self.letters, self.truncation)

    def items(self):
        """Nonzero (word, coefficient) pairs in length-lex order."""
        index = {letter: i for i, letter in enumerate(self.letters)}
        return sorted(
            self.table.items(),
            key=lambda kv: (len(kv[0]), [index[x] for x in kv[0]]),
        )

    def restrict(self, truncation: int) -> "TruncatedSeries":
        if truncation > self.truncation:
            raise TruncationError(truncation, self.truncation)
        table = {w: c for w, c in self.table.items() if len(w) <= truncation}
        return TruncatedSeries(self.letters, truncation, table, self.alphabet)

    def __add__(self, other):
        return linear_combine([1, 1], [self, other])

    def __sub__(self, other):
        return linear_combine([1, -1], [self, other])

    def __rmul__(self, scalar):
        return linear_combine([scalar], [self])


def _check_letters(p: TruncatedSeries, word: tuple) -> None:
    allowed = set(p.letters)
    for letter in word:
        if letter not in allowed:
            raise AlphabetError(f"letter {letter!r} not in series alphabet")


def evaluate(p: TruncatedSeries, word) -> Fraction:
    if isinstance(word, Word) and word.alphabet != p.alphabet:
        raise AlphabetError("word alphabet differs from series alphabet", word.alphabet, p.alphabet)
    word = _key(word)
    if len(word) > p.truncation:
        raise TruncationError(len(word), p.truncation)
    coeff = p.table.get(word)
    if coeff is None:
        _check_letters(p, word)
        return Fraction(0)
    return coeff


def right_shift(p: TruncatedSeries, h) -> TruncatedSeries:
    """``h -> p``: the series k |-> p(k h), truncated at N - |h|."""
    h = _key(h)
    if len(h) > p.truncation:
        raise TruncationError(len(h), p.truncation)
    _check_letters(p, h)
    n = len(h)
    if n == 0:
        return p
    table = {w[:-n]: c for w, c in p.table.items() if len(w) >= n and w[-n:] == h}
    return TruncatedSeries(p.letters, p.truncation - n, table, p.alphabet)


def left_shift(p: TruncatedSeries, h) -> TruncatedSeries:
    """``p <- h``: the series k |-> p(h k), truncated at N - |h|."""
    h = _key(h)
    if len(h) > p.truncation:
        raise TruncationError(len(h), p.truncation)
    _check_letters(p, h)
    n = len(h)
    if n == 0:
        return p
    table = {w[n:]: c for w, c in p.table.items() if len(w) >= n and w[:n] == h}
    return TruncatedSeries(p.letters, p.truncation - n, table, p.alphabet)


def tabulate(letters: Sequence, oracle: SeriesOracle, truncation: int, alphabet: Alphabet | None = None) -> TruncatedSeries:
    """Evaluate a coefficient rule on every word up to ``truncation``."""
    table = {w: oracle(w) for w in words_upto(letters, truncation)}
    return TruncatedSeries(tuple(letters), truncation, table, alphabet)


def indicator_series(letters: Sequence, membership: Callable[[tuple], bool], truncation: int, alphabet: Alphabet | None = None) -> TruncatedSeries:
    """1 on words of the language, 0 elsewhere."""
    return tabulate(letters, lambda w: 1 if membership(w) else 0, truncation, alphabet)


def linear_combine(coeffs: Sequence, series: Sequence[TruncatedSeries]) -> TruncatedSeries:
    if len(coeffs) != len(series):
        raise ValueError(f"{len(coeffs)} coefficients for {len(series)} series")
    if not series:
        raise ValueError("linear_combine needs at least one series")
    first = series[0]
    for other in series[1:]:
        if not first.same_space(other):
            raise AlphabetError("series over different alphabets", first.letters, other.letters)
    truncation = min(s.truncation for s in series)
    table: dict = {}
    for coeff, s in zip(coeffs, series):
        coeff = to_scalar(coeff)
        if coeff == 0:
            continue
        for w, c in s.table.items():
            if len(w) <= truncation:
                table[w] = table.get(w, 0) + coeff * c
    return TruncatedSeries(first.letters, truncation, table, first.alphabet)

