"""JSON Lines event logs / series tables.

Line 1 is a header; each further line is one word record::

    {"truncation": 3, "alphabet": {"pids": [...], "labels": [...], "generators": [...]}}
    {"word": [["1", "a", "s"], ["2", "b", "t"]], "coeff": "1/2"}

A simple series (no PIDs or labels) uses ``"generators": [...]`` in the
header instead of ``"alphabet"`` and plain symbol lists as words.  Records
may carry an ``"id"``.  A log whose records all have ``"coeff"`` is a series
table; one whose records have none is a labeled learning sequence.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .errors import FormatError, SeriesRealError
from .events import Alphabet
from .series import TruncatedSeries, format_scalar, to_scalar


def dumps_line(obj) -> str:
    return json.dumps(obj, ensure_ascii=False)


@dataclass
class EventLog:
    truncation: int
    alphabet: Alphabet | None
    generators: tuple
    records: list          # (word_id or None, word tuple, Fraction or None)

    @property
    def is_labeled(self) -> bool:
        return self.alphabet is not None

    @property
    def is_series(self) -> bool:
        return all(c is not None for _, _, c in self.records)

    def to_series(self) -> TruncatedSeries:
        if not self.is_series:
            raise FormatError("log holds a learning sequence, not a series table")
        table = {w: c for _, w, c in self.records}
        if self.is_labeled:
            return TruncatedSeries.labeled(self.alphabet, self.truncation, table)
        return TruncatedSeries.simple(self.generators, self.truncation, table)

    def header(self) -> dict:
        if self.is_labeled:
            return {"truncation": self.truncation, "alphabet": self.alphabet.to_config()}
        return {"truncation": self.truncation, "generators": list(self.generators)}


def _word_json(word: tuple, labeled: bool) -> list:
    return [list(e) for e in word] if labeled else list(word)


def parse_log(lines: Iterable[str]) -> EventLog:
    lines = list(lines)
    numbered = [(i + 1, ln) for i, ln in enumerate(lines) if ln.strip()]
    if not numbered:
        raise FormatError("empty document: missing header", line=1)
    lineno, text = numbered[0]
    try:
        header = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"header is not JSON: {exc.msg}", line=lineno) from None
    if not isinstance(header, dict) or "truncation" not in header:
        raise FormatError("header must be an object with 'truncation'", line=lineno)
    truncation = header["truncation"]
    if not isinstance(truncation, int) or truncation < 0:
        raise FormatError("truncation must be a nonnegative integer", line=lineno)
    try:
        if "alphabet" in header:
            alphabet = Alphabet.from_config(header["alphabet"])
            generators = alphabet.generators
        elif "generators" in header:
            alphabet = None
            generators = tuple(str(g) for g in header["generators"])
            if not generators or len(set(generators)) != len(generators):
                raise FormatError("generators must be nonempty and unique", line=lineno)
        else:
            raise FormatError("header needs 'alphabet' or 'generators'", line=lineno)
    except SeriesRealError as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(str(exc), line=lineno) from None

    gen_set = set(generators)
    records = []
    seen_words: dict = {}
    seen_ids: set = set()
    for lineno, text in numbered[1:]:
        try:
            rec = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatError(f"record is not JSON: {exc.msg}", line=lineno) from None
        if not isinstance(rec, dict) or "word" not in rec:
            raise FormatError("record must be an object with 'word'", line=lineno)
        try:
            if alphabet is not None:
                word = tuple(alphabet.validate_event(e) for e in rec["word"])
            else:
                word = tuple(str(s) for s in rec["word"])
                bad = [s for s in word if s not in gen_set]
                if bad:
                    raise FormatError(f"unknown generators {bad}")
            coeff = to_scalar(rec["coeff"]) if "coeff" in rec else None
        except SeriesRealError as exc:
            raise FormatError(str(exc), line=lineno) from None
        if len(word) > truncation:
            raise FormatError(f"word of length {len(word)} exceeds truncation {truncation}", line=lineno)
        word_id = rec.get("id")
        if word_id is not None:
            if word_id in seen_ids:
                raise FormatError(f"duplicate id {word_id!r}", line=lineno)
            seen_ids.add(word_id)
        if coeff is not None:
            if word in seen_words:
                raise FormatError(
                    f"duplicate word {_word_json(word, alphabet is not None)} (first on line {seen_words[word]})",
                    line=lineno,
                )
            seen_words[word] = lineno
        records.append((word_id, word, coeff))
    kinds = {c is None for _, _, c in records}
    if len(kinds) > 1:
        raise FormatError("records mix series coefficients and bare learning-sequence words")
    return EventLog(truncation, alphabet, generators, records)


def ingest(path) -> EventLog:
    with open(path, encoding="utf-8") as fh:
        return parse_log(fh.read().splitlines())


def emit(log: EventLog) -> str:
    out = [dumps_line(log.header())]
    for word_id, word, coeff in log.records:
        rec = {}
        if word_id is not None:
            rec["id"] = word_id
        rec["word"] = _word_json(word, log.is_labeled)
        if coeff is not None:
            rec["coeff"] = format_scalar(coeff)
        out.append(dumps_line(rec))
    return "\n".join(out) + "\n"


def series_to_log(p: TruncatedSeries) -> EventLog:
    generators = p.alphabet.generators if p.is_labeled else p.letters
    return EventLog(p.truncation, p.alphabet, generators, [(None, w, c) for w, c in p.items()])


def dumps_series(p: TruncatedSeries) -> str:
    return emit(series_to_log(p))


def loads_series(text: str) -> TruncatedSeries:
    return parse_log(text.splitlines()).to_series()


def load_series(path) -> TruncatedSeries:
    return ingest(path).to_series()


def save_series(p: TruncatedSeries, path) -> None:
    Path(path).write_text(dumps_series(p), encoding="utf-8")


def dumps_json(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
