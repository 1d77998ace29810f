"""Event space: PIDs x labels x generator symbols, and words over it.

Internally a word is a plain tuple of letters.  For labeled series a letter
is an :class:`Event`; for simple series a letter is a generator name.  The
:class:`Word` wrapper carries its alphabet so that concatenation can refuse
to mix words from different alphabets.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import AlphabetError

SimpleWord = tuple  # tuple[str, ...]


class Event(NamedTuple):
    pid: str
    label: str
    symbol: str

    def to_json(self) -> list:
        return [self.pid, self.label, self.symbol]


def _ordered_unique(name: str, items: Iterable) -> tuple:
    items = tuple(str(x) for x in items)
    if not items:
        raise AlphabetError(f"{name} must be nonempty")
    if len(set(items)) != len(items):
        raise AlphabetError(f"{name} contains duplicates: {list(items)}")
    return items


@dataclass(frozen=True)
class Alphabet:
    """Finite PID, label and generator sets with a fixed iteration order."""

    pids: tuple
    labels: tuple
    generators: tuple
    _pid_index: dict = field(init=False, repr=False, compare=False, hash=False)
    _label_index: dict = field(init=False, repr=False, compare=False, hash=False)
    _gen_index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        pids = _ordered_unique("pids", self.pids)
        labels = _ordered_unique("labels", self.labels)
        gens = _ordered_unique("generators", self.generators)
        object.__setattr__(self, "pids", pids)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "_pid_index", {p: i for i, p in enumerate(pids)})
        object.__setattr__(self, "_label_index", {l: i for i, l in enumerate(labels)})
        object.__setattr__(self, "_gen_index", {g: i for i, g in enumerate(gens)})

    @classmethod
    def from_config(cls, config: dict) -> "Alphabet":
        try:
            return cls(config["pids"], config["labels"], config["generators"])
        except KeyError as exc:
            raise AlphabetError(f"alphabet config missing key {exc}") from None

    def to_config(self) -> dict:
        return {
            "pids": list(self.pids),
            "labels": list(self.labels),
            "generators": list(self.generators),
        }

    def pid_index(self, pid: str) -> int:
        try:
            return self._pid_index[pid]
        except KeyError:
            raise AlphabetError(f"unknown pid {pid!r}") from None

    def label_index(self, label: str) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise AlphabetError(f"unknown label {label!r}") from None

    def generator_index(self, symbol: str) -> int:
        try:
            return self._gen_index[symbol]
        except KeyError:
            raise AlphabetError(f"unknown generator {symbol!r}") from None

    def event(self, pid: str, label: str, symbol: str) -> Event:
        """Build a validated event."""
        self.pid_index(pid)
        self.label_index(label)
        self.generator_index(symbol)
        return Event(pid, label, symbol)

    def validate_event(self, event) -> Event:
        if isinstance(event, Event):
            return self.event(*event)
        try:
            pid, label, symbol = event
        except (TypeError, ValueError):
            raise AlphabetError(f"event must be a [pid, label, symbol] triple, got {event!r}") from None
        return self.event(pid, label, symbol)

    @property
    def events(self) -> tuple:
        """All of D in pid-major, then label, then generator order."""
        return tuple(
            Event(i, l, s)
            for i, l, s in itertools.product(self.pids, self.labels, self.generators)
        )


@dataclass(frozen=True)
class Word:
    """A finite sequence of events over a fixed alphabet."""

    alphabet: Alphabet
    events: tuple = ()

    def __post_init__(self):
        object.__setattr__(
            self, "events", tuple(self.alphabet.validate_event(e) for e in self.events)
        )

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self) -> Iterator[Event]:
        return iter(self.events)

    def __getitem__(self, index):
        return self.events[index]

    def __add__(self, other: "Word") -> "Word":
        return concat(self, other)

    def to_json(self) -> list:
        return [e.to_json() for e in self.events]


def concat(u: Word, v: Word) -> Word:
    if u.alphabet != v.alphabet:
        raise AlphabetError(
            f"cannot concatenate words over different alphabets: "
            f"{u.alphabet.to_config()} vs {v.alphabet.to_config()}",
            left=u.alphabet,
            right=v.alphabet,
        )
    return Word(u.alphabet, u.events + v.events)


def lift(alphabet: Alphabet, pid: str, label: str, word: Sequence[str]) -> Word:
    """Attach a fixed (pid, label) to every symbol of a simple word."""
    return Word(alphabet, tuple(alphabet.event(pid, label, s) for s in word))


def words_upto(letters: Sequence, n: int) -> Iterator[tuple]:
    """All words of length <= n, in length-lexicographic order of ``letters``."""
    for k in range(n + 1):
        yield from itertools.product(letters, repeat=k)


def count_words(n_letters: int, n: int) -> int:
    return sum(n_letters**k for k in range(n + 1))


def project(p, pid: str, label: str):
    """Restrict a labeled series to the lifted words of one (pid, label).

    ``q(s1...sk) = p((pid,label,s1)...(pid,label,sk))``.  Mixed-PID words
    carry no information for q under this reading.
    """
    from .series import TruncatedSeries

    alphabet = p.alphabet
    if alphabet is None:
        raise AlphabetError("project needs a labeled series")
    alphabet.pid_index(pid)
    alphabet.label_index(label)
    table = {}
    for word, coeff in p.table.items():
        if all(e.pid == pid and e.label == label for e in word):
            table[tuple(e.symbol for e in word)] = coeff
    return TruncatedSeries.simple(alphabet.generators, p.truncation, table)


def embed(q, alphabet: Alphabet, pid: str, label: str):
    """Place a simple series on the lifted words of (pid, label); zero elsewhere."""
    from .series import TruncatedSeries

    if tuple(q.letters) != alphabet.generators:
        raise AlphabetError(
            "simple series generators do not match alphabet",
            left=q.letters,
            right=alphabet.generators,
        )
    table = {lift(alphabet, pid, label, w).events: c for w, c in q.table.items()}
    return TruncatedSeries.labeled(alphabet, q.truncation, table)
