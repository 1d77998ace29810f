"""Finite-rank tests and linear state-space realizations of series.

Everything here is exact.  Ranks are computed on finite blocks; whether a
rank has settled is reported by comparing two consecutive block sizes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, lcm
from typing import Mapping, Sequence

from . import exact
from .divided import DividedPowerSeries
from .errors import AlphabetError, RankNotStabilizedError, TruncationError, UnsupportedError
from .events import project, words_upto
from .lie import lie_basis
from .series import TruncatedSeries, evaluate, format_scalar, to_scalar


@dataclass(frozen=True)
class HankelBlock:
    prefixes: tuple
    suffixes: tuple
    matrix: tuple  # rows of Fractions

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.prefixes), len(self.suffixes)


def hankel(p: TruncatedSeries, max_prefix: int, max_suffix: int) -> HankelBlock:
    """Entries ``p(u v)`` for all prefixes ``|u| <= max_prefix`` and suffixes ``|v| <= max_suffix``."""
    if max_prefix < 0 or max_suffix < 0:
        raise ValueError("block sizes must be >= 0")
    if max_prefix + max_suffix > p.truncation:
        raise TruncationError(max_prefix + max_suffix, p.truncation)
    prefixes = tuple(words_upto(p.letters, max_prefix))
    suffixes = tuple(words_upto(p.letters, max_suffix))
    table = p.table
    zero = Fraction(0)
    matrix = tuple(tuple(table.get(u + v, zero) for v in suffixes) for u in prefixes)
    return HankelBlock(prefixes, suffixes, matrix)


def hankel_rank(block: HankelBlock) -> int:
    return exact.rank(block.matrix)


def _shift_vector(p: TruncatedSeries, expansion: Mapping[tuple, int], eval_words: Sequence[tuple]) -> list:
    """Values of ``b -> p`` on ``eval_words`` where b is a combination of words."""
    table = p.table
    zero = Fraction(0)
    return [sum((c * table.get(k + w, zero) for w, c in expansion.items()), zero) for k in eval_words]


def lie_rank(p: TruncatedSeries, bracket_depth: int, eval_len: int) -> int:
    """Rank of the bracket shifts ``b -> p`` over the Lyndon basis up to ``bracket_depth``,
    each evaluated on all words of length ``<= eval_len``."""
    if bracket_depth < 0 or eval_len < 0:
        raise ValueError("depths must be >= 0")
    if bracket_depth + eval_len > p.truncation:
        raise TruncationError(bracket_depth + eval_len, p.truncation)
    eval_words = list(words_upto(p.letters, eval_len))
    rows = [_shift_vector(p, b.expansion, eval_words) for b in lie_basis(p.letters, bracket_depth)]
    return exact.rank(rows) if rows else 0


@dataclass(frozen=True, eq=False)
class LinearRealization:
    """init . action(s1) ... action(sk) . out, with right action on row vectors."""

    generators: tuple
    dim: int
    action: Mapping[str, tuple]
    init: tuple
    out: tuple

    def __post_init__(self):
        n = self.dim
        gens = tuple(self.generators)
        action = {}
        for g in gens:
            if g not in self.action:
                raise AlphabetError(f"no action matrix for generator {g!r}")
            m = tuple(tuple(to_scalar(x) for x in row) for row in self.action[g])
            if len(m) != n or any(len(row) != n for row in m):
                raise ValueError(f"action[{g!r}] must be {n}x{n}")
            action[g] = m
        extra = set(self.action) - set(gens)
        if extra:
            raise AlphabetError(f"action matrices for unknown generators {sorted(extra)}")
        init = tuple(to_scalar(x) for x in self.init)
        out = tuple(to_scalar(x) for x in self.out)
        if len(init) != n or len(out) != n:
            raise ValueError("init and out must have length dim")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "action", action)
        object.__setattr__(self, "init", init)
        object.__setattr__(self, "out", out)

    def __eq__(self, other):
        if not isinstance(other, LinearRealization):
            return NotImplemented
        return (self.generators, self.dim, self.action, self.init, self.out) == (
            other.generators, other.dim, other.action, other.init, other.out)

    __hash__ = None

    def state(self, word: Sequence[str]) -> list:
        x = list(self.init)
        for s in word:
            if s not in self.action:
                raise AlphabetError(f"unknown symbol {s!r}")
            x = exact.vecmat(x, self.action[s])
        return x

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "generators": list(self.generators),
            "action": {g: [[format_scalar(x) for x in row] for row in self.action[g]] for g in self.generators},
            "init": [format_scalar(x) for x in self.init],
            "out": [format_scalar(x) for x in self.out],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "LinearRealization":
        return cls(doc["generators"], doc["dim"], doc["action"], doc["init"], doc["out"])


def realized_value(r: LinearRealization, word: Sequence[str]) -> Fraction:
    return exact.dot(r.state(word), r.out)


def series_of(r: LinearRealization, truncation: int) -> TruncatedSeries:
    """Tabulate a realization on every word up to ``truncation`` (prefix-tree walk).

    The walk runs on integers: matrices are scaled by the common denominator
    ``L`` of their entries, so the state after ``w`` is ``L**|w|`` times the
    rational one and each coefficient needs a single division.
    """
    scale = lcm(1, *(Fraction(x).denominator for g in r.generators for row in r.action[g] for x in row))
    d_init = lcm(1, *(Fraction(x).denominator for x in r.init))
    d_out = lcm(1, *(Fraction(x).denominator for x in r.out))
    mats = {g: [[int(Fraction(x) * scale) for x in row] for row in r.action[g]] for g in r.generators}
    out = [int(Fraction(x) * d_out) for x in r.out]
    n = r.dim
    table = {}
    frontier = [((), [int(Fraction(x) * d_init) for x in r.init])]
    denom = d_init * d_out
    for depth in range(truncation + 1):
        nxt = []
        for word, x in frontier:
            num = sum(a * b for a, b in zip(x, out))
            if num:
                table[word] = Fraction(num, denom)
            if depth < truncation:
                for g in r.generators:
                    m = mats[g]
                    nxt.append((word + (g,), [sum(x[i] * m[i][j] for i in range(n)) for j in range(n)]))
        frontier = nxt
        denom *= scale
    return TruncatedSeries.simple(r.generators, truncation, table)


def _block_rank(p: TruncatedSeries, k: int) -> int:
    return 0 if k < 0 else hankel_rank(hankel(p, k, k))


def realize_from_hankel(p: TruncatedSeries, max_len: int | None = None, check: bool = True) -> LinearRealization:
    """Minimal linear realization read off a Hankel block.

    ``max_len`` defaults to ``truncation // 2``.  The rank of the
    ``(max_len-1)``- and ``max_len``-blocks must agree.  Pivot prefixes are
    the length-lex-earliest independent rows among prefixes of length
    ``< max_len``; pivot suffixes likewise among suffixes of length
    ``< max_len``.  With ``check`` every coefficient up to the truncation is
    compared against the realization.
    """
    if p.is_labeled:
        raise UnsupportedError("realize_from_hankel works on simple series; project first")
    if max_len is None:
        max_len = p.truncation // 2
    if 2 * max_len > p.truncation:
        raise TruncationError(2 * max_len, p.truncation)
    n = _block_rank(p, max_len)
    if _block_rank(p, max_len - 1) != n:
        raise RankNotStabilizedError(
            f"Hankel rank {_block_rank(p, max_len - 1)} at size {max_len - 1} differs from "
            f"{n} at size {max_len}; raise the truncation"
        )
    gens = p.letters
    if n == 0:
        r = LinearRealization(gens, 0, {g: () for g in gens}, (), ())
    else:
        table = p.table
        zero = Fraction(0)
        short = list(words_upto(gens, max_len - 1))
        full_suffixes = list(words_upto(gens, max_len))
        rows = [[table.get(u + v, zero) for v in full_suffixes] for u in short]
        pivot_rows = exact.independent_rows(rows)
        assert len(pivot_rows) == n
        P = [short[i] for i in pivot_rows]
        sub = [[table.get(u + v, zero) for v in short] for u in P]
        pivot_cols = exact.independent_rows(exact.transpose(sub))
        assert len(pivot_cols) == n
        Q = [short[j] for j in pivot_cols]
        minor_inv = exact.inverse([[table.get(u + v, zero) for v in Q] for u in P])

        def coords(word):
            return exact.vecmat([table.get(word + v, zero) for v in Q], minor_inv)

        init = coords(())
        action = {g: [coords(u + (g,)) for u in P] for g in gens}
        out = [table.get(u, zero) for u in P]
        r = LinearRealization(gens, n, action, init, out)
    if check:
        realized = series_of(r, p.truncation)
        if realized != p:
            bad = next(w for w in p.words() if evaluate(realized, w) != evaluate(p, w))
            raise RankNotStabilizedError(
                f"rank-{n} realization disagrees with the series at {list(bad)}; raise the truncation"
            )
    return r


def differential_representation(p: TruncatedSeries, degree: int) -> DividedPowerSeries:
    """One-generator case: ``f = sum_k c_k x^k`` with ``c_k = p(e^k) / k!``."""
    if p.is_labeled or len(p.letters) != 1:
        raise UnsupportedError("differential representation needs a single-generator simple series")
    if degree > p.truncation:
        raise TruncationError(degree, p.truncation)
    (e,) = p.letters
    return DividedPowerSeries(1, degree, {(k,): evaluate(p, (e,) * k) / factorial(k) for k in range(degree + 1)})


@dataclass
class EvaluationReport:
    degree: int
    values: list                      # epsilon(f <- e^k) for k = 0..degree
    violations: list = field(default_factory=list)  # (k, expected p(e^k), got)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "values": [format_scalar(v) for v in self.values],
            "violations": [[k, format_scalar(a), format_scalar(b)] for k, a, b in self.violations],
            "passed": self.passed,
        }


def verify_evaluation(f: DividedPowerSeries, p: TruncatedSeries, degree: int) -> EvaluationReport:
    """Check ``epsilon(f <- e^k) == p(e^k)`` for ``k <= degree``, acting by derivatives."""
    if f.n_vars != 1 or p.is_labeled or len(p.letters) != 1:
        raise UnsupportedError("verify_evaluation needs one variable and one generator")
    (e,) = p.letters
    report = EvaluationReport(degree, [])
    g = f
    for k in range(degree + 1):
        got = g.counit() if k <= f.degree else Fraction(0)
        expected = evaluate(p, (e,) * k)
        report.values.append(got)
        if got != expected:
            report.violations.append((k, expected, got))
        g = g.derivative(0)
    return report


@dataclass
class RegularityReport:
    bracket_depth: int
    eval_len: int
    ranks: dict          # (pid, label) -> (rank at eval_len - 1, rank at eval_len)

    def stabilized(self, key) -> bool:
        lo, hi = self.ranks[key]
        return lo == hi

    @property
    def regular(self) -> bool:
        return all(self.stabilized(k) for k in self.ranks)

    def rank(self, key) -> int:
        return self.ranks[key][1]

    def to_json(self) -> dict:
        return {
            "bracket_depth": self.bracket_depth,
            "eval_len": self.eval_len,
            "projections": [
                {"pid": i, "label": l, "lie_rank": hi, "lie_rank_previous": lo, "stabilized": lo == hi}
                for (i, l), (lo, hi) in self.ranks.items()
            ],
            "regular": self.regular,
        }


def is_regular(p: TruncatedSeries, bracket_depth: int, eval_len: int) -> RegularityReport:
    """Lie rank of every (pid, label) projection at ``eval_len - 1`` and ``eval_len``."""
    if not p.is_labeled:
        raise AlphabetError("is_regular needs a labeled series")
    if eval_len < 1:
        raise ValueError("eval_len must be >= 1 to compare two consecutive sizes")
    ranks = {}
    for i in p.alphabet.pids:
        for l in p.alphabet.labels:
            q = project(p, i, l)
            ranks[(i, l)] = (lie_rank(q, bracket_depth, eval_len - 1), lie_rank(q, bracket_depth, eval_len))
    return RegularityReport(bracket_depth, eval_len, ranks)
