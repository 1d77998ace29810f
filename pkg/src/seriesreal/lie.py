"""Lyndon-word basis of the free Lie algebra, truncated at a bracket depth.

Each basis element is stored as its expansion in the free associative
algebra: a dict mapping words (tuples of generators) to integer coefficients.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


def lyndon_words(n_letters: int, max_len: int) -> list[tuple[int, ...]]:
    """Lyndon words over ``range(n_letters)`` up to ``max_len`` (Duval), sorted length-lex."""
    if n_letters == 0 or max_len == 0:
        return []
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        out.append(tuple(w))
        m = len(w)
        while len(w) < max_len:
            w.append(w[len(w) - m])
        while w and w[-1] == n_letters - 1:
            w.pop()
    return sorted(out, key=lambda t: (len(t), t))


def standard_factorization(word: tuple) -> tuple[tuple, tuple]:
    """Split a Lyndon word of length >= 2 as u v with v its longest proper Lyndon suffix."""
    for i in range(1, len(word)):
        v = word[i:]
        if _is_lyndon(v):
            return word[:i], v
    raise ValueError(f"{word} has no proper Lyndon suffix")


def _is_lyndon(word: tuple) -> bool:
    return all(word < word[i:] + word[:i] for i in range(1, len(word))) if len(word) > 1 else bool(word)


def _mul(x: dict, y: dict) -> dict:
    out: dict = {}
    for u, a in x.items():
        for v, b in y.items():
            w = u + v
            out[w] = out.get(w, 0) + a * b
    return out


def bracket(x: dict, y: dict) -> dict:
    """Commutator ``xy - yx`` of two elements of the free associative algebra."""
    out = _mul(x, y)
    for w, c in _mul(y, x).items():
        out[w] = out.get(w, 0) - c
    return {w: c for w, c in out.items() if c != 0}


@dataclass(frozen=True)
class BracketElement:
    lyndon: tuple          # generator names
    expression: str        # e.g. "[a,[a,b]]"
    expansion: dict        # word -> int


@dataclass(frozen=True)
class LieBracketBasis:
    generators: tuple
    depth: int
    elements: tuple

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def lie_basis(generators: Sequence[str], depth: int) -> LieBracketBasis:
    generators = tuple(generators)
    cache: dict[tuple, tuple[str, dict]] = {}

    def build(word: tuple) -> tuple[str, dict]:
        if word in cache:
            return cache[word]
        if len(word) == 1:
            g = generators[word[0]]
            result = (g, {(g,): 1})
        else:
            u, v = standard_factorization(word)
            eu, xu = build(u)
            ev, xv = build(v)
            result = (f"[{eu},{ev}]", bracket(xu, xv))
        cache[word] = result
        return result

    elements = []
    for word in lyndon_words(len(generators), depth):
        expr, expansion = build(word)
        elements.append(BracketElement(tuple(generators[i] for i in word), expr, expansion))
    return LieBracketBasis(generators, depth, tuple(elements))
