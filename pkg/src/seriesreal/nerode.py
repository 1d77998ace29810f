"""Myhill-Nerode residual tables and the automata built from them.

Automata here read generator symbols (simple words).  Labeled events are
reduced to this case with :func:`seriesreal.events.project`.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import AlphabetError, InsufficientDepthError
from .events import words_upto
from .series import TruncatedSeries, indicator_series

Membership = Callable[[tuple], bool]


@dataclass(frozen=True)
class ResidualTable:
    """One representative prefix per observed residual class.

    ``signatures[i]`` is the membership bit-vector of ``representatives[i]``
    followed by each word of ``suffixes`` (length-lex, ``len <= n_suffix``).
    """

    symbols: tuple
    n_prefix: int
    n_suffix: int
    suffixes: tuple
    representatives: tuple
    signatures: tuple

    def signature(self, membership: Membership, word: tuple) -> tuple:
        word = tuple(word)
        return tuple(bool(membership(word + w)) for w in self.suffixes)

    def class_index(self, signature: tuple) -> int | None:
        try:
            return self.signatures.index(signature)
        except ValueError:
            return None

    def __len__(self):
        return len(self.representatives)


def build_residuals(membership: Membership, symbols: Sequence[str], n_prefix: int, n_suffix: int) -> ResidualTable:
    if n_prefix < 0 or n_suffix < 0:
        raise ValueError("depths must be >= 0")
    symbols = tuple(symbols)
    suffixes = tuple(words_upto(symbols, n_suffix))
    reps: list[tuple] = []
    sigs: list[tuple] = []
    seen: set[tuple] = set()
    # length-lex iteration: the first member met is the least representative
    for u in words_upto(symbols, n_prefix):
        sig = tuple(bool(membership(u + w)) for w in suffixes)
        if sig not in seen:
            seen.add(sig)
            reps.append(u)
            sigs.append(sig)
    return ResidualTable(symbols, n_prefix, n_suffix, suffixes, tuple(reps), tuple(sigs))


@dataclass(frozen=True)
class Dfa:
    """Complete deterministic automaton; ``transitions[state][symbol_index]``."""

    symbols: tuple
    n_states: int
    initial: int
    accepting: frozenset
    transitions: tuple

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "transitions", tuple(tuple(row) for row in self.transitions))
        if len(self.transitions) != self.n_states:
            raise ValueError("transition table must have one row per state")
        for row in self.transitions:
            if len(row) != len(self.symbols):
                raise ValueError("transition table must be total over symbols")
            if any(not 0 <= t < self.n_states for t in row):
                raise ValueError("transition target out of range")
        if not 0 <= self.initial < self.n_states:
            raise ValueError("initial state out of range")
        if any(not 0 <= a < self.n_states for a in self.accepting):
            raise ValueError("accepting state out of range")

    def _symbol_index(self, symbol) -> int:
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise AlphabetError(f"symbol {symbol!r} not in automaton alphabet") from None

    def run(self, word: Sequence[str]) -> int:
        state = self.initial
        for s in word:
            state = self.transitions[state][self._symbol_index(s)]
        return state

    def accepts(self, word: Sequence[str]) -> bool:
        return self.run(word) in self.accepting

    def to_json(self) -> dict:
        return {
            "symbols": list(self.symbols),
            "states": self.n_states,
            "initial": self.initial,
            "accepting": sorted(self.accepting),
            "transitions": [list(row) for row in self.transitions],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Dfa":
        return cls(doc["symbols"], doc["states"], doc["initial"], doc["accepting"], doc["transitions"])


def _reachable_renumbered(dfa: Dfa, block_of: Sequence[int] | None = None) -> Dfa:
    """BFS from the initial state in symbol order; drops unreachable states.

    With ``block_of`` the states are first merged into those blocks.
    """
    if block_of is None:
        block_of = list(range(dfa.n_states))
    start = block_of[dfa.initial]
    number = {start: 0}
    queue = deque([dfa.initial])
    order = [dfa.initial]
    while queue:
        q = queue.popleft()
        for t in dfa.transitions[q]:
            b = block_of[t]
            if b not in number:
                number[b] = len(number)
                queue.append(t)
                order.append(t)
    transitions = [[number[block_of[t]] for t in dfa.transitions[q]] for q in order]
    accepting = {number[block_of[q]] for q in order if q in dfa.accepting}
    return Dfa(dfa.symbols, len(order), 0, accepting, transitions)


def residuals_to_dfa(table: ResidualTable, membership: Membership, check: bool = True) -> Dfa:
    """States are residual classes; ``class(u) --s--> class(u s)``.

    Raises :class:`InsufficientDepthError` when a successor signature is not
    among the observed classes, or (with ``check``) when the automaton
    disagrees with the language on some word of length
    ``<= n_prefix + n_suffix``.
    """
    transitions = []
    for rep in table.representatives:
        row = []
        for s in table.symbols:
            idx = table.class_index(table.signature(membership, rep + (s,)))
            if idx is None:
                raise InsufficientDepthError(
                    f"successor {list(rep + (s,))} matches no residual class at "
                    f"n_prefix={table.n_prefix}, n_suffix={table.n_suffix}; raise the depths"
                )
            row.append(idx)
        transitions.append(row)
    # the empty suffix comes first, so bit 0 is membership of the representative
    accepting = {i for i, sig in enumerate(table.signatures) if sig[0]}
    dfa = _reachable_renumbered(Dfa(table.symbols, len(table), 0, accepting, transitions))
    if check:
        horizon = table.n_prefix + table.n_suffix
        for w in words_upto(table.symbols, horizon):
            if dfa.accepts(w) != bool(membership(w)):
                raise InsufficientDepthError(
                    f"automaton disagrees with the language on {list(w)}; raise the depths"
                )
    return dfa


def dfa_to_indicator(dfa: Dfa, truncation: int) -> TruncatedSeries:
    return indicator_series(dfa.symbols, dfa.accepts, truncation)


def minimize(dfa: Dfa) -> Dfa:
    """Moore partition refinement, then canonical BFS numbering."""
    dfa = _reachable_renumbered(dfa)
    block = [1 if q in dfa.accepting else 0 for q in range(dfa.n_states)]
    n_blocks = len(set(block))
    while True:
        keys = [(block[q],) + tuple(block[t] for t in dfa.transitions[q]) for q in range(dfa.n_states)]
        ids: dict = {}
        new_block = [ids.setdefault(k, len(ids)) for k in keys]
        if len(ids) == n_blocks:
            break
        block, n_blocks = new_block, len(ids)
    return _reachable_renumbered(dfa, block)
