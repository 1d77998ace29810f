"""Parametrized classifier families and near-best realization search.

Goodness of a parameter vector ``a`` is the worst deviation, over all event
words up to a horizon, between the series and the pairing of ``M(a)`` with
the evolved learning set.  It is piecewise constant in ``a``, so the search
is derivative free: a low-discrepancy sweep of the box followed by a
box-clipped Nelder-Mead refinement from the best sweep point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.stats import qmc

from .errors import AlphabetError, FormatError, ParameterError, TruncationError
from .profiles import (
    Classifier,
    ConstantClassifier,
    LabelRestricted,
    LearningSet,
    LinearThresholdClassifier,
    TableClassifier,
    _number,
    evolve,
    pairing,
)
from .series import TruncatedSeries, evaluate

EQUALITY_TOL = 1e-9


@dataclass(frozen=True)
class ParameterBox:
    lower: tuple
    upper: tuple

    def __post_init__(self):
        lower = tuple(float(x) for x in self.lower)
        upper = tuple(float(x) for x in self.upper)
        if len(lower) != len(upper):
            raise ParameterError("lower and upper bounds differ in length")
        if any(lo > hi for lo, hi in zip(lower, upper)):
            raise ParameterError(f"box has lower > upper: {lower} vs {upper}")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def m(self) -> int:
        return len(self.lower)

    @property
    def width(self) -> np.ndarray:
        return np.subtract(self.upper, self.lower)

    @property
    def midpoint(self) -> np.ndarray:
        return (np.asarray(self.lower) + np.asarray(self.upper)) / 2

    def contains(self, a) -> bool:
        a = np.asarray(a, dtype=float)
        return a.shape == (self.m,) and bool(np.all(a >= self.lower) and np.all(a <= self.upper))

    def clip(self, a) -> np.ndarray:
        return np.clip(np.asarray(a, dtype=float), self.lower, self.upper)

    def to_json(self) -> dict:
        return {"lower": list(self.lower), "upper": list(self.upper)}


@dataclass(frozen=True)
class ParametrizedFamily:
    """``M : A -> F``.  ``builder`` must be pure."""

    box: ParameterBox
    builder: Callable[[tuple], Classifier]
    kind: str = "custom"

    def __call__(self, a) -> Classifier:
        if not self.box.contains(a):
            raise ParameterError(f"parameter {list(np.atleast_1d(a))} outside box {self.box.to_json()}")
        return self.builder(tuple(float(x) for x in np.atleast_1d(a)))


def constant_family(labels: Sequence[str], label: str) -> ParametrizedFamily:
    f = ConstantClassifier(tuple(labels), label)
    return ParametrizedFamily(ParameterBox((), ()), lambda a: f, "constant")


def _layout_entry(entry) -> Callable[[tuple], float]:
    if isinstance(entry, (int, float)) and not isinstance(entry, bool):
        value = float(entry)
        return lambda a: value
    if isinstance(entry, Mapping) and "param" in entry:
        j = int(entry["param"])
        scale = float(entry.get("scale", 1.0))
        offset = float(entry.get("offset", 0.0))
        return lambda a: offset + scale * a[j]
    raise FormatError(f"layout entry must be a number or {{'param': j}}, got {entry!r}")


def _layout_params(layout: Mapping) -> set[int]:
    used = set()
    for doc in layout.values():
        for entry in list(doc.get("weights", [])) + [doc.get("bias", 0)]:
            if isinstance(entry, Mapping):
                used.add(int(entry["param"]))
    return used


def linear_threshold_family(labels: Sequence[str], dim: int, layout: Mapping, box: ParameterBox) -> ParametrizedFamily:
    """Weights and biases are constants or affine in single parameters.

    ``layout[label] = {"weights": [entry] * dim, "bias": entry}`` where an
    entry is a number or ``{"param": j, "scale": s, "offset": o}``.
    """
    labels = tuple(labels)
    missing = [l for l in labels if l not in layout]
    if missing:
        raise FormatError(f"layout missing labels {missing}")
    weights, biases = [], []
    for l in labels:
        ws = layout[l].get("weights", [0] * dim)
        if len(ws) != dim:
            raise FormatError(f"layout for {l!r} needs {dim} weights, got {len(ws)}")
        weights.append([_layout_entry(e) for e in ws])
        biases.append(_layout_entry(layout[l].get("bias", 0)))
    bad = [j for j in _layout_params(layout) if not 0 <= j < box.m]
    if bad:
        raise FormatError(f"layout refers to parameters {bad} outside a box of dimension {box.m}")

    def build(a):
        return LinearThresholdClassifier(
            labels,
            [[w(a) for w in ws] for ws in weights],
            [b(a) for b in biases],
        )

    return ParametrizedFamily(box, build, "linear_threshold")


def lookup_family(labels: Sequence[str], keys: Sequence[tuple], default: str, box: ParameterBox) -> ParametrizedFamily:
    """One parameter per key state; ``floor(a_j)`` indexes the label list (clamped)."""
    labels = tuple(labels)
    keys = [tuple(k) for k in keys]
    if box.m != len(keys):
        raise FormatError(f"lookup family needs {len(keys)} parameters, box has {box.m}")

    def build(a):
        table = {k: labels[min(max(int(math.floor(x)), 0), len(labels) - 1)] for k, x in zip(keys, a)}
        return TableClassifier(labels, table, default)

    return ParametrizedFamily(box, build, "lookup")


def family_from_config(labels: Sequence[str], dim: int, doc: Mapping) -> ParametrizedFamily:
    kind = doc.get("kind")
    if kind == "constant":
        return constant_family(labels, doc["label"])
    box_doc = doc.get("box")
    if box_doc is None:
        raise FormatError(f"{kind} family needs a 'box'")
    box = ParameterBox(box_doc["lower"], box_doc["upper"])
    if kind == "linear_threshold":
        return linear_threshold_family(labels, dim, doc["layout"], box)
    if kind == "lookup":
        keys = [tuple(_number(x) for x in k) for k in doc["keys"]]
        return lookup_family(labels, keys, doc["default"], box)
    raise FormatError(f"unknown family kind {kind!r}")


class _Trajectories:
    """Evolved learning sets for every word up to the horizon, with states interned.

    Classifiers are then evaluated once per distinct state.
    """

    def __init__(self, chi: LearningSet, horizon: int, p: TruncatedSeries | None = None):
        if p is not None:
            if p.truncation < horizon:
                raise TruncationError(horizon, p.truncation)
            if p.alphabet != chi.alphabet:
                raise AlphabetError("series and learning set use different alphabets", p.alphabet, chi.alphabet)
        self.horizon = horizon
        self.n_pids = len(chi.alphabet.pids)
        index: dict = {}
        self.words = []
        self.rows = []
        for h, state in evolve(chi, horizon):
            self.words.append(h)
            self.rows.append(tuple((prof.label, index.setdefault(prof.state, len(index))) for prof in state.profiles))
        self.states = list(index)
        self.targets = None if p is None else [evaluate(p, h) for h in self.words]

    def decisions(self, f: Classifier) -> list:
        return [f(s) for s in self.states]

    def pairings(self, f: Classifier, label=None) -> list[Fraction]:
        """Pairing of ``f`` (or of ``f`` restricted to ``label``) with every evolved set."""
        dec = self.decisions(f)
        n = self.n_pids
        if label is None:
            return [Fraction(sum(1 for l, i in row if dec[i] == l), n) for row in self.rows]
        return [Fraction(sum(1 for l, i in row if l == label and dec[i] == label), n) for row in self.rows]

    def deviation(self, f: Classifier) -> Fraction:
        return max(abs(t - v) for t, v in zip(self.targets, self.pairings(f)))


def goodness(M: ParametrizedFamily, a, p: TruncatedSeries, chi: LearningSet, horizon: int) -> float:
    """``max_{|h| <= horizon} |p_h - <<M(a), chi . h>>|``."""
    f = M(a)
    return float(_Trajectories(chi, horizon, p).deviation(f))


@dataclass
class GoodnessReport:
    a0: list
    value: float
    trace: list                       # [(a, value)]
    horizon: int
    epsilon: float
    budget: int
    grid_points: int
    final_diameter: float | None
    converged: bool
    budget_limited: bool
    lower_estimate: float
    gap_bound: float
    gap_is_heuristic: bool = True

    @property
    def exact_realization(self) -> bool:
        return self.value == 0.0

    def best_so_far(self) -> list[float]:
        out, best = [], math.inf
        for _, v in self.trace:
            best = min(best, v)
            out.append(best)
        return out

    def to_json(self) -> dict:
        return {
            "a0": list(self.a0),
            "value": self.value,
            "exact_realization": self.exact_realization,
            "horizon": self.horizon,
            "epsilon": self.epsilon,
            "budget": self.budget,
            "evaluations": len(self.trace),
            "grid_points": self.grid_points,
            "final_diameter": self.final_diameter,
            "converged": self.converged,
            "budget_limited": self.budget_limited,
            "lower_estimate": self.lower_estimate,
            "gap_bound": self.gap_bound,
            "gap_is_heuristic": self.gap_is_heuristic,
            "trace": [{"a": list(a), "value": v} for a, v in self.trace],
        }


def grid_points(box: ParameterBox, n: int) -> np.ndarray:
    """First ``n`` points of the unscrambled Halton sequence mapped into the box."""
    if box.m == 0:
        return np.zeros((1, 0))
    unit = qmc.Halton(d=box.m, scramble=False).random(n)
    return np.asarray(box.lower) + unit * box.width


def near_best_search(
    M: ParametrizedFamily,
    p: TruncatedSeries,
    chi: LearningSet,
    horizon: int,
    epsilon: float,
    budget: int,
) -> GoodnessReport:
    if epsilon <= 0:
        raise ParameterError("epsilon must be > 0")
    if budget < 1:
        raise ParameterError("budget must be >= 1")
    traj = _Trajectories(chi, horizon, p)
    box = M.box
    trace: list = []

    def f(a) -> float:
        a = box.clip(a)
        v = float(traj.deviation(M(a)))
        trace.append(([float(x) for x in a], v))
        return v

    if box.m == 0:
        f(np.zeros(0))
        a0, v0 = trace[0]
        return GoodnessReport(a0, v0, trace, horizon, epsilon, budget, 1, None, True, False, v0, 0.0)

    n_grid = max(1, budget // 2) if budget > 1 else 1
    for a in grid_points(box, n_grid):
        f(a)
    diameter, converged = _nelder_mead(f, box, trace, budget, epsilon)
    best = min(range(len(trace)), key=lambda i: trace[i][1])
    a0, v0 = trace[best]
    lower = min(v for _, v in trace)
    return GoodnessReport(
        a0=a0,
        value=v0,
        trace=trace,
        horizon=horizon,
        epsilon=epsilon,
        budget=budget,
        grid_points=n_grid,
        final_diameter=diameter,
        converged=converged,
        budget_limited=not converged,
        lower_estimate=lower,
        gap_bound=v0 - lower,
    )


def _nelder_mead(f, box: ParameterBox, trace: list, budget: int, epsilon: float) -> tuple[float | None, bool]:
    """Refine from the best point in ``trace`` until the simplex diameter (max-norm)
    drops below ``epsilon`` or the evaluation budget runs out.

    Returns ``(final diameter, converged)``.  A zero objective is optimal and
    counts as converged.
    """
    best_i = min(range(len(trace)), key=lambda i: trace[i][1])
    x0 = np.asarray(trace[best_i][0], dtype=float)
    v0 = trace[best_i][1]
    if v0 == 0.0:
        return 0.0, True
    free = [j for j in range(box.m) if box.width[j] > 0]
    if not free:
        return 0.0, True

    def left() -> int:
        return budget - len(trace)

    simplex = [x0]
    values = [v0]
    for j in free:
        if left() <= 0:
            return None, False
        step = 0.05 * box.width[j]
        x = x0.copy()
        x[j] = x[j] + step if x[j] + step <= box.upper[j] else x[j] - step
        simplex.append(x)
        values.append(f(x))

    def diameter() -> float:
        pts = np.asarray(simplex)
        return float(np.max(pts.max(axis=0) - pts.min(axis=0)))

    while True:
        order = np.argsort(values, kind="stable")
        simplex = [simplex[i] for i in order]
        values = [values[i] for i in order]
        d = diameter()
        if d < epsilon or values[0] == 0.0:
            return d, True
        if left() <= 0:
            return d, False
        centroid = np.mean(simplex[:-1], axis=0)
        worst = simplex[-1]
        xr = box.clip(centroid + (centroid - worst))
        vr = f(xr)
        if vr < values[0]:
            if left() > 0:
                xe = box.clip(centroid + 2.0 * (centroid - worst))
                ve = f(xe)
                if ve < vr:
                    simplex[-1], values[-1] = xe, ve
                    continue
            simplex[-1], values[-1] = xr, vr
            continue
        if vr < values[-2]:
            simplex[-1], values[-1] = xr, vr
            continue
        if left() <= 0:
            return diameter(), False
        if vr < values[-1]:
            xc = box.clip(centroid + 0.5 * (xr - centroid))
        else:
            xc = box.clip(centroid + 0.5 * (worst - centroid))
        vc = f(xc)
        if vc < min(vr, values[-1]):
            simplex[-1], values[-1] = xc, vc
            continue
        # shrink toward the best vertex
        for i in range(1, len(simplex)):
            if left() <= 0:
                return diameter(), False
            simplex[i] = box.clip(simplex[0] + 0.5 * (simplex[i] - simplex[0]))
            values[i] = f(simplex[i])


def label_restrict(f: Classifier, label: str) -> LabelRestricted:
    if label not in f.labels:
        raise AlphabetError(f"unknown label {label!r}")
    return LabelRestricted(f, label)


def label_series(f: Classifier, chi: LearningSet, label: str, horizon: int) -> TruncatedSeries:
    """``h |-> <<f_label, chi . h>>``: PIDs where f predicts ``label`` and the current label is ``label``."""
    g = label_restrict(f, label)
    table = {h: pairing(g, state) for h, state in evolve(chi, horizon)}
    return TruncatedSeries.labeled(chi.alphabet, horizon, table)


@dataclass
class Decomposition:
    parts: dict               # label -> TruncatedSeries
    total: TruncatedSeries
    mismatches: list = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.mismatches


def decompose(f: Classifier, chi: LearningSet, horizon: int) -> Decomposition:
    """Per-label series and a word-by-word check that they sum to the full series."""
    from .profiles import series_from_triple

    parts = {l: label_series(f, chi, l, horizon) for l in chi.alphabet.labels}
    total = series_from_triple(f, chi, horizon)
    mismatches = []
    for h in total.words():
        s = sum((evaluate(q, h) for q in parts.values()), Fraction(0))
        if s != evaluate(total, h):
            mismatches.append(h)
    return Decomposition(parts, total, mismatches)


@dataclass
class ActiveParameterReport:
    per_label: dict           # label -> sorted list of active coordinates
    active: list              # union over labels
    probes: list              # probe points used
    tol: float
    horizon: int

    @property
    def inactive(self) -> list:
        m = len(self.probes[0]) if self.probes else 0
        return [j for j in range(m) if j not in self.active]

    def to_json(self) -> dict:
        return {
            "horizon": self.horizon,
            "tol": self.tol,
            "per_label": {l: v for l, v in self.per_label.items()},
            "active": self.active,
            "probes": [list(a) for a in self.probes],
        }


def active_parameters(
    M: ParametrizedFamily,
    p: TruncatedSeries,
    chi: LearningSet,
    horizon: int,
    probe_count: int,
    tol: float,
    seed: int,
    rel_step: float = 0.25,
) -> ActiveParameterReport:
    """Coordinates whose central-difference perturbation changes some per-label pairing.

    At each of ``probe_count`` uniform random points of the box, coordinate
    ``j`` is moved by ``+-rel_step * width_j`` (clipped); it is active for a
    label when any ``<<M(a)_label, chi . h>>`` moves by more than ``tol``.
    """
    if tol <= 0:
        raise ParameterError("tol must be > 0")
    if probe_count < 1:
        raise ParameterError("probe_count must be >= 1")
    traj = _Trajectories(chi, horizon, p)
    labels = chi.alphabet.labels
    box = M.box
    rng = np.random.default_rng(seed)
    per_label = {l: set() for l in labels}
    probes = [rng.uniform(box.lower, box.upper) for _ in range(probe_count)] if box.m else []
    for a in probes:
        for j in range(box.m):
            step = rel_step * box.width[j]
            if step == 0:
                continue
            lo, hi = a.copy(), a.copy()
            lo[j] = max(a[j] - step, box.lower[j])
            hi[j] = min(a[j] + step, box.upper[j])
            f_lo, f_hi = M(lo), M(hi)
            for l in labels:
                if j in per_label[l]:
                    continue
                v_lo = traj.pairings(f_lo, l)
                v_hi = traj.pairings(f_hi, l)
                if any(float(abs(x - y)) > tol for x, y in zip(v_lo, v_hi)):
                    per_label[l].add(j)
    union = sorted(set().union(*per_label.values())) if per_label else []
    return ActiveParameterReport(
        {l: sorted(s) for l, s in per_label.items()},
        union,
        [[float(x) for x in a] for a in probes],
        tol,
        horizon,
    )


def freeze(M: ParametrizedFamily, active: Sequence[int]) -> ParametrizedFamily:
    """Same family with every coordinate outside ``active`` pinned to the box midpoint."""
    keep = set(active)
    mid = M.box.midpoint

    def build(a):
        b = tuple(x if j in keep else float(mid[j]) for j, x in enumerate(a))
        return M.builder(b)

    return ParametrizedFamily(M.box, build, M.kind)
