"""Learning sets of profiles, classifiers, and the event action on them.

A learning set assigns a (label, state) profile to every PID.  An event
``(pid, label, symbol)`` moves that PID's state by the symbol's action and
overwrites its label.  The pairing of a classifier with a learning set is
the exact fraction of PIDs whose current label the classifier reproduces.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Mapping, NamedTuple, Sequence

from .errors import AlphabetError, FormatError, TruncationError
from .events import Alphabet, Event, Word
from .series import TruncatedSeries, evaluate, format_scalar, to_scalar


def _number(x):
    """Floats stay floats; ints, Fractions and "n/d" strings become Fractions."""
    if isinstance(x, float):
        return x
    return to_scalar(x)


def _format_number(x):
    return x if isinstance(x, float) else format_scalar(x)


class StateSpace:
    """Fixed-length numeric vectors acted on (on the right) by generators."""

    generators: tuple
    dim: int

    def act(self, state: tuple, symbol: str) -> tuple:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class VectorSpace(StateSpace):
    generators: tuple
    dim: int
    action: Mapping[str, tuple]

    def __post_init__(self):
        gens = tuple(self.generators)
        action = {}
        for g in gens:
            if g not in self.action:
                raise AlphabetError(f"no action matrix for generator {g!r}")
            m = tuple(tuple(_number(x) for x in row) for row in self.action[g])
            if len(m) != self.dim or any(len(row) != self.dim for row in m):
                raise ValueError(f"action[{g!r}] must be {self.dim}x{self.dim}")
            action[g] = m
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "action", action)

    @classmethod
    def from_realization(cls, r) -> "VectorSpace":
        return cls(r.generators, r.dim, r.action)

    def act(self, state, symbol):
        try:
            m = self.action[symbol]
        except KeyError:
            raise AlphabetError(f"unknown generator {symbol!r}") from None
        n = self.dim
        return tuple(sum(state[i] * m[i][j] for i in range(n)) for j in range(n))

    def to_json(self) -> dict:
        return {
            "kind": "vector",
            "dim": self.dim,
            "action": {g: [[_format_number(x) for x in row] for row in self.action[g]] for g in self.generators},
        }


@dataclass(frozen=True, eq=False)
class CustomSpace(StateSpace):
    """Arbitrary, possibly nonlinear, update rule ``(state, symbol) -> state``."""

    generators: tuple
    dim: int
    rule: Callable[[tuple, str], tuple]

    def act(self, state, symbol):
        if symbol not in self.generators:
            raise AlphabetError(f"unknown generator {symbol!r}")
        new = tuple(self.rule(tuple(state), symbol))
        if len(new) != self.dim:
            raise ValueError(f"custom action returned a state of length {len(new)}, expected {self.dim}")
        return new


class Profile(NamedTuple):
    label: str
    state: tuple


@dataclass(frozen=True)
class LearningSet:
    """One profile per PID, stored in the alphabet's PID order."""

    alphabet: Alphabet
    space: StateSpace = field(compare=False, hash=False)
    profiles: tuple

    def __post_init__(self):
        if tuple(self.space.generators) != self.alphabet.generators:
            raise AlphabetError("state space generators differ from alphabet generators",
                                self.space.generators, self.alphabet.generators)
        if len(self.profiles) != len(self.alphabet.pids):
            raise AlphabetError(
                f"need exactly one profile per pid ({len(self.alphabet.pids)}), got {len(self.profiles)}"
            )
        profiles = []
        for prof in self.profiles:
            label, state = prof
            self.alphabet.label_index(label)
            state = tuple(state)
            if len(state) != self.space.dim:
                raise ValueError(f"state {state} has length {len(state)}, expected {self.space.dim}")
            profiles.append(Profile(label, state))
        object.__setattr__(self, "profiles", tuple(profiles))

    @classmethod
    def from_mapping(cls, alphabet: Alphabet, space: StateSpace, entries: Mapping) -> "LearningSet":
        missing = [i for i in alphabet.pids if i not in entries]
        extra = [i for i in entries if i not in alphabet.pids]
        if missing or extra:
            raise AlphabetError(f"learning set pids mismatch: missing {missing}, unknown {extra}")
        return cls(alphabet, space, tuple(Profile(*entries[i]) for i in alphabet.pids))

    def __getitem__(self, pid: str) -> Profile:
        return self.profiles[self.alphabet.pid_index(pid)]

    def items(self) -> Iterator[tuple[str, Profile]]:
        return zip(self.alphabet.pids, self.profiles)

    def to_json(self) -> dict:
        return {
            pid: {"label": prof.label, "state": [_format_number(x) for x in prof.state]}
            for pid, prof in self.items()
        }

    @classmethod
    def from_json(cls, alphabet: Alphabet, space: StateSpace, doc: Mapping) -> "LearningSet":
        entries = {}
        for pid, rec in doc.items():
            try:
                entries[pid] = (rec["label"], tuple(_number(x) for x in rec["state"]))
            except (KeyError, TypeError):
                raise FormatError(f"profile for pid {pid!r} needs 'label' and 'state'") from None
        return cls.from_mapping(alphabet, space, entries)


class _Star:
    """The label that no classifier output in a label set ever equals."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "STAR"

    def __reduce__(self):
        return (_Star, ())


STAR = _Star()


class Classifier:
    """Total, deterministic map from states to labels."""

    labels: tuple

    def __call__(self, state: tuple):
        raise NotImplementedError

    def to_json(self) -> dict:
        raise TypeError(f"{type(self).__name__} has no declarative form")


@dataclass(frozen=True)
class ConstantClassifier(Classifier):
    labels: tuple
    label: str

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if self.label not in self.labels:
            raise AlphabetError(f"unknown label {self.label!r}")

    def __call__(self, state):
        return self.label

    def to_json(self):
        return {"kind": "constant", "label": self.label}


@dataclass(frozen=True)
class LinearThresholdClassifier(Classifier):
    """argmax over labels of ``w_l . x + b_l``; ties go to the earliest label."""

    labels: tuple
    weights: tuple   # one weight vector per label, in label order
    bias: tuple      # one offset per label

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "weights", tuple(tuple(w) for w in self.weights))
        object.__setattr__(self, "bias", tuple(self.bias))
        if not (len(self.weights) == len(self.bias) == len(self.labels)):
            raise ValueError("need one weight vector and one bias per label")

    def scores(self, state) -> list:
        return [sum(w * x for w, x in zip(ws, state)) + b for ws, b in zip(self.weights, self.bias)]

    def __call__(self, state):
        scores = self.scores(state)
        best = 0
        for i in range(1, len(scores)):
            if scores[i] > scores[best]:
                best = i
        return self.labels[best]

    def to_json(self):
        return {
            "kind": "linear_threshold",
            "weights": {l: [_format_number(x) for x in w] for l, w in zip(self.labels, self.weights)},
            "bias": {l: _format_number(b) for l, b in zip(self.labels, self.bias)},
        }


@dataclass(frozen=True)
class TableClassifier(Classifier):
    """Lookup on exact states with a default label for everything else."""

    labels: tuple
    table: Mapping[tuple, str]
    default: str

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        for lab in list(self.table.values()) + [self.default]:
            if lab not in self.labels:
                raise AlphabetError(f"unknown label {lab!r}")

    def __hash__(self):
        return hash((self.labels, tuple(sorted(self.table.items(), key=repr)), self.default))

    def __call__(self, state):
        return self.table.get(tuple(state), self.default)

    def to_json(self):
        rows = [[[_format_number(x) for x in k], v] for k, v in self.table.items()]
        return {"kind": "table", "table": rows, "default": self.default}


@dataclass(frozen=True)
class FunctionClassifier(Classifier):
    labels: tuple
    decide: Callable[[tuple], str]

    def __call__(self, state):
        return self.decide(tuple(state))


@dataclass(frozen=True)
class LabelRestricted(Classifier):
    """Returns ``label`` where the base classifier does, ``STAR`` elsewhere."""

    base: Classifier
    label: str

    @property
    def labels(self):
        return self.base.labels

    def __call__(self, state):
        return self.label if self.base(state) == self.label else STAR


def classifier_from_json(labels: Sequence[str], doc: Mapping) -> Classifier:
    labels = tuple(labels)
    kind = doc.get("kind")
    if kind == "constant":
        return ConstantClassifier(labels, doc["label"])
    if kind == "linear_threshold":
        try:
            weights = [[_number(x) for x in doc["weights"][l]] for l in labels]
            bias = [_number(doc.get("bias", {}).get(l, 0)) for l in labels]
        except KeyError as exc:
            raise FormatError(f"linear_threshold classifier missing weights for label {exc}") from None
        return LinearThresholdClassifier(labels, weights, bias)
    if kind == "table":
        table = {tuple(_number(x) for x in k): v for k, v in doc["table"]}
        return TableClassifier(labels, table, doc["default"])
    raise FormatError(f"unknown classifier kind {kind!r}")


def act_event(chi: LearningSet, event) -> LearningSet:
    pid, label, symbol = chi.alphabet.validate_event(event)
    j = chi.alphabet.pid_index(pid)
    old = chi.profiles[j]
    moved = Profile(label, chi.space.act(old.state, symbol))
    profiles = chi.profiles[:j] + (moved,) + chi.profiles[j + 1:]
    return LearningSet(chi.alphabet, chi.space, profiles)


def act_word(chi: LearningSet, word) -> LearningSet:
    if isinstance(word, Word):
        if word.alphabet != chi.alphabet:
            raise AlphabetError("word alphabet differs from learning set alphabet", word.alphabet, chi.alphabet)
        word = word.events
    for event in word:
        chi = act_event(chi, event)
    return chi


def pairing(f: Classifier, chi: LearningSet) -> Fraction:
    hits = sum(1 for prof in chi.profiles if f(prof.state) == prof.label)
    return Fraction(hits, len(chi.profiles))


def evolve(chi: LearningSet, horizon: int) -> Iterator[tuple[tuple, LearningSet]]:
    """``(h, chi . h)`` for every event word ``|h| <= horizon``, length-lex."""
    letters = chi.alphabet.events
    frontier = [((), chi)]
    for depth in range(horizon + 1):
        nxt = []
        for word, state in frontier:
            yield word, state
            if depth < horizon:
                for d in letters:
                    nxt.append((word + (d,), act_event(state, d)))
        frontier = nxt


def series_from_triple(f: Classifier, chi: LearningSet, horizon: int) -> TruncatedSeries:
    """The series ``h |-> <<f, chi . h>>`` up to ``horizon``."""
    table = {h: pairing(f, state) for h, state in evolve(chi, horizon)}
    return TruncatedSeries.labeled(chi.alphabet, horizon, table)


@dataclass
class RealizationReport:
    horizon: int
    violations: list = field(default_factory=list)  # (word, p_h, pairing)
    max_deviation: Fraction = Fraction(0)

    @property
    def realizes(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "horizon": self.horizon,
            "realizes": self.realizes,
            "max_deviation": format_scalar(self.max_deviation),
            "violations": [
                {"word": [list(e) for e in w], "expected": format_scalar(a), "pairing": format_scalar(b)}
                for w, a, b in self.violations
            ],
        }


def is_realization(f: Classifier, chi: LearningSet, p: TruncatedSeries, horizon: int) -> RealizationReport:
    if p.truncation < horizon:
        raise TruncationError(horizon, p.truncation)
    if p.alphabet != chi.alphabet:
        raise AlphabetError("series and learning set use different alphabets", p.alphabet, chi.alphabet)
    report = RealizationReport(horizon)
    for h, state in evolve(chi, horizon):
        expected = evaluate(p, h)
        got = pairing(f, state)
        dev = abs(expected - got)
        if dev:
            report.violations.append((h, expected, got))
            report.max_deviation = max(report.max_deviation, dev)
    return report
