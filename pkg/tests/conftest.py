from fractions import Fraction

import pytest

from seriesreal.events import Alphabet, embed
from seriesreal.profiles import LearningSet, LinearThresholdClassifier, VectorSpace
from seriesreal.series import TruncatedSeries, tabulate


# Languages and series over {a, b} used across modules.

def even_a(w):
    return w.count("a") % 2 == 0


def contains_ab(w):
    return "ab" in "".join(w)


def a_star_b(w):
    return len(w) >= 1 and w[-1] == "b" and all(s == "a" for s in w[:-1])


def geometric(n=6, gens=("a",)):
    return tabulate(gens, lambda w: Fraction(1, 2) ** len(w), n)


def count_a(n=6):
    return tabulate(("a", "b"), lambda w: w.count("a"), n)


def indicator(letters, pred, n):
    return tabulate(letters, lambda w: 1 if pred(w) else 0, n)


TWO_PID = Alphabet(("1", "2"), ("a",), ("a", "b"))


def two_pid_composite(n=6):
    """Geometric series on PID 1, count-of-a on PID 2."""
    g = embed(geometric(n, ("a", "b")), TWO_PID, "1", "a")
    c = embed(count_a(n), TWO_PID, "2", "a")
    return g + c


# The 2-PID, 2-label, 2-generator profile fixture.  States are (x, 1);
# s adds 1 to x, t doubles x.

FIX = Alphabet(("1", "2"), ("a", "b"), ("s", "t"))
SPACE = VectorSpace(
    ("s", "t"),
    2,
    {"s": [[1, 0], [1, 1]], "t": [[2, 0], [0, 1]]},
)


def threshold(cut):
    """Label b when x > cut, else a (ties go to a)."""
    return LinearThresholdClassifier(("a", "b"), [[0, 0], [1, 0]], [0, -Fraction(cut)])


@pytest.fixture
def chi():
    return LearningSet.from_mapping(
        FIX, SPACE, {"1": ("a", (Fraction(0), Fraction(1))), "2": ("b", (Fraction(2), Fraction(1)))}
    )


def simulate(profiles, word, decide):
    """Straight-line reference for chi . h and the pairing, independent of the library.

    ``profiles``: {pid: (label, x)}; ``decide``: x -> label.
    """
    prof = dict(profiles)
    for pid, label, sym in word:
        x = prof[pid][1]
        x = x + 1 if sym == "s" else 2 * x
        prof[pid] = (label, x)
    hits = sum(1 for label, x in prof.values() if decide(x) == label)
    return Fraction(hits, len(prof))


FIX_PROFILES = {"1": ("a", Fraction(0)), "2": ("b", Fraction(2))}


# Fit fixtures.

def cut_family(lower=0.0, upper=5.0):
    """One parameter: label b when x > a[0], else a."""
    from seriesreal.fit import ParameterBox, linear_threshold_family

    layout = {"a": {"weights": [0, 0]}, "b": {"weights": [1, 0], "bias": {"param": 0, "scale": -1}}}
    return linear_threshold_family(("a", "b"), 2, layout, ParameterBox((lower,), (upper,)))


# States (x, 1) with s: x+1, t: x+2.  PID 1 starts at x=0 with label a,
# PID 2 at x=10 with label b.  a[0] is a cut in [-1, 1/2]; a[1] is ignored.
SHIFT_SPACE = VectorSpace(("s", "t"), 2, {"s": [[1, 0], [1, 1]], "t": [[1, 0], [2, 1]]})


def shift_chi():
    return LearningSet.from_mapping(
        FIX, SHIFT_SPACE, {"1": ("a", (Fraction(0), Fraction(1))), "2": ("b", (Fraction(10), Fraction(1)))}
    )


def ignored_param_family():
    from seriesreal.fit import ParameterBox, ParametrizedFamily

    def build(a):
        return LinearThresholdClassifier(("a", "b"), [[0, 0], [1, 0]], [0, -Fraction(a[0])])

    return ParametrizedFamily(ParameterBox((-1.0, 0.0), (0.5, 1.0)), build, "custom")


def dense_cut_minimum(profiles, target, horizon, grid):
    """Brute-force min over cuts of max_h |p(h) - hits/|I||, for the x+1 / 2x fixture."""
    import itertools as it
    import numpy as np

    events = [(pid, label, sym) for pid in ("1", "2") for label in ("a", "b") for sym in ("s", "t")]
    grid = np.asarray(grid, dtype=float)
    worst = np.zeros_like(grid)
    for k in range(horizon + 1):
        for h in it.product(events, repeat=k):
            prof = dict(profiles)
            for pid, label, sym in h:
                x = prof[pid][1]
                prof[pid] = (label, x + 1 if sym == "s" else 2 * x)
            hits = sum(np.where(float(x) > grid, label == "b", label == "a").astype(int) for label, x in prof.values())
            worst = np.maximum(worst, np.abs(float(target(h)) - hits / len(prof)))
    i = int(np.argmin(worst))
    return float(worst[i]), float(grid[i])


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance")
    for _, line in sorted(mod.RESULTS):
        terminalreporter.write_line(line)
