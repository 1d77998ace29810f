"""``seriesreal <subcommand> --config <path> [--out <path>]``.

Exit status: 0 success, 2 a computed negative answer (violations found, not
regular, decomposition mismatch), 1 the input could not be processed.
Errors are reported as one JSON object on stderr.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import formats
from .errors import FormatError, SeriesRealError
from .events import Alphabet, project
from .fit import active_parameters, decompose, family_from_config, near_best_search
from .nerode import build_residuals, residuals_to_dfa
from .profiles import LearningSet, VectorSpace, classifier_from_json, is_realization, series_from_triple
from .realize import LinearRealization, hankel, hankel_rank, is_regular, lie_rank, realize_from_hankel
from .series import TruncatedSeries, evaluate, format_scalar

SUBCOMMANDS = ("rank", "realize", "verify", "nerode", "regular", "fit", "simulate", "decompose")


class Context:
    def __init__(self, config: dict, base: Path):
        self.config = config
        self.base = base

    def get(self, key, default=None):
        return self.config.get(key, default)

    def require(self, key):
        if key not in self.config:
            raise FormatError(f"config is missing {key!r}")
        return self.config[key]

    def path(self, value) -> Path:
        p = Path(value)
        return p if p.is_absolute() else self.base / p

    def series(self, key="series"):
        return formats.load_series(self.path(self.require(key)))

    def alphabet(self) -> Alphabet:
        return Alphabet.from_config(self.require("alphabet"))

    def space(self, alphabet: Alphabet):
        doc = self.require("space")
        kind = doc.get("kind", "vector")
        if kind == "vector":
            return VectorSpace(alphabet.generators, doc["dim"], doc["action"])
        if kind == "realization":
            if "path" in doc:
                doc = json.loads(self.path(doc["path"]).read_text(encoding="utf-8"))
            else:
                doc = doc["realization"]
            return VectorSpace.from_realization(LinearRealization.from_json(doc))
        raise FormatError(f"unknown space kind {kind!r}")

    def triple(self):
        alphabet = self.alphabet()
        space = self.space(alphabet)
        chi = LearningSet.from_json(alphabet, space, self.require("learning_set"))
        return alphabet, space, chi


def _simple(ctx: Context):
    p = ctx.series()
    target = ctx.get("project")
    if p.is_labeled:
        if not target:
            raise FormatError("labeled series: give 'project': {'pid': ..., 'label': ...}")
        p = project(p, target["pid"], target["label"])
    return p


def cmd_rank(ctx: Context):
    p = _simple(ctx)
    mp, ms = ctx.require("max_prefix"), ctx.require("max_suffix")
    depth, ev = ctx.require("bracket_depth"), ctx.require("eval_len")
    h = hankel_rank(hankel(p, mp, ms))
    h_prev = hankel_rank(hankel(p, mp - 1, ms - 1)) if mp > 0 and ms > 0 else None
    l = lie_rank(p, depth, ev)
    l_prev = lie_rank(p, depth, ev - 1) if ev > 0 else None
    compatible = hankel_rank(hankel(p, ev, depth))
    return {
        "truncation": p.truncation,
        "hankel": {"max_prefix": mp, "max_suffix": ms, "rank": h, "rank_previous": h_prev,
                   "stabilized": None if h_prev is None else h_prev == h},
        "lie": {"bracket_depth": depth, "eval_len": ev, "rank": l, "rank_previous": l_prev,
                "stabilized": None if l_prev is None else l_prev == l},
        "compatible_hankel_rank": compatible,
        "lie_le_hankel": l <= compatible,
    }, 0


def cmd_realize(ctx: Context):
    p = _simple(ctx)
    return realize_from_hankel(p, ctx.get("max_len")).to_json(), 0


def cmd_verify(ctx: Context):
    alphabet, _, chi = ctx.triple()
    f = classifier_from_json(alphabet.labels, ctx.require("classifier"))
    p = ctx.series()
    report = is_realization(f, chi, p, ctx.require("horizon"))
    return report.to_json(), 0 if report.realizes else 2


def _membership(ctx: Context, language: dict, symbols: tuple):
    if "regex" in language:
        if any(len(s) != 1 for s in symbols):
            raise FormatError("regex languages need single-character generators")
        pattern = re.compile(language["regex"])
        return lambda w: pattern.fullmatch("".join(w)) is not None
    if "series" in language:
        p = formats.load_series(ctx.path(language["series"]))
        if p.is_labeled or p.letters != symbols:
            raise FormatError("language series must be simple over the same generators")
        return lambda w: evaluate(p, w) != 0
    raise FormatError("language needs 'regex' or 'series'")


def cmd_nerode(ctx: Context):
    symbols = tuple(ctx.require("generators"))
    member = _membership(ctx, ctx.require("language"), symbols)
    table = build_residuals(member, symbols, ctx.require("n_prefix"), ctx.require("n_suffix"))
    dfa = residuals_to_dfa(table, member)
    return {"dfa": dfa.to_json(), "representatives": [list(r) for r in table.representatives]}, 0


def cmd_regular(ctx: Context):
    report = is_regular(ctx.series(), ctx.require("bracket_depth"), ctx.require("eval_len"))
    return report.to_json(), 0 if report.regular else 2


def cmd_fit(ctx: Context):
    alphabet, space, chi = ctx.triple()
    M = family_from_config(alphabet.labels, space.dim, ctx.require("family"))
    p = ctx.series()
    horizon = ctx.require("horizon")
    report = near_best_search(M, p, chi, horizon, ctx.require("epsilon"), ctx.require("budget"))
    doc = {"search": report.to_json()}
    active = ctx.get("active")
    if active is not None:
        if "seed" not in active:
            raise FormatError("active-parameter probing is randomized: 'seed' is required")
        doc["active_parameters"] = active_parameters(
            M, p, chi, horizon, active.get("probe_count", 16), active.get("tol", 1e-9), active["seed"]
        ).to_json()
    return doc, 0


def cmd_simulate(ctx: Context):
    alphabet, _, chi = ctx.triple()
    f = classifier_from_json(alphabet.labels, ctx.require("classifier"))
    return series_from_triple(f, chi, ctx.require("horizon")), 0


def _table_json(q):
    return [{"word": [list(e) for e in w], "coeff": format_scalar(c)} for w, c in q.items()]


def cmd_decompose(ctx: Context):
    alphabet, _, chi = ctx.triple()
    f = classifier_from_json(alphabet.labels, ctx.require("classifier"))
    d = decompose(f, chi, ctx.require("horizon"))
    doc = {
        "horizon": d.total.truncation,
        "labels": {l: _table_json(q) for l, q in d.parts.items()},
        "total": _table_json(d.total),
        "consistent": d.consistent,
        "mismatches": [[list(e) for e in w] for w in d.mismatches],
    }
    return doc, 0 if d.consistent else 2


COMMANDS = {
    "rank": cmd_rank,
    "realize": cmd_realize,
    "verify": cmd_verify,
    "nerode": cmd_nerode,
    "regular": cmd_regular,
    "fit": cmd_fit,
    "simulate": cmd_simulate,
    "decompose": cmd_decompose,
}


def run(command: str, config_path, out_path=None) -> int:
    try:
        config_path = Path(config_path)
        try:
            config = json.loads(config_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise FormatError(f"config is not JSON: {exc.msg}", line=exc.lineno) from None
        if not isinstance(config, dict):
            raise FormatError("config must be a JSON object")
        result, status = COMMANDS[command](Context(config, config_path.parent))
        if isinstance(result, TruncatedSeries):
            text = formats.dumps_series(result)
        else:
            text = formats.dumps_json(result)
    except (SeriesRealError, OSError, KeyError, TypeError, ValueError) as exc:
        kind = type(exc).__name__
        message = f"missing key {exc}" if isinstance(exc, KeyError) else str(exc)
        sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
        return 1
    if out_path is None:
        sys.stdout.write(text)
    else:
        Path(out_path).write_text(text, encoding="utf-8")
    return status


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="seriesreal", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=SUBCOMMANDS)
    parser.add_argument("--config", required=True, help="JSON run configuration")
    parser.add_argument("--out", help="write the artifact here instead of stdout")
    args = parser.parse_args(argv)
    return run(args.command, args.config, args.out)


if __name__ == "__main__":
    sys.exit(main())
