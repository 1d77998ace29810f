import json
import subprocess
import sys
from fractions import Fraction

import pytest

from cli_setup import TRIPLE, write_configs
from conftest import FIX, count_a
from seriesreal import formats
from seriesreal.cli import SUBCOMMANDS, main
from seriesreal.nerode import Dfa
from seriesreal.realize import LinearRealization, series_of
from seriesreal.series import evaluate


@pytest.fixture
def configs(tmp_path):
    return write_configs(tmp_path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_every_subcommand_runs(configs, capsys):
    for cmd in SUBCOMMANDS:
        code, out, err = run(capsys, cmd, "--config", str(configs[cmd]))
        assert code == 0, (cmd, err)
        assert out and not err


def test_rank_on_count_a(configs, capsys):
    code, out, _ = run(capsys, "rank", "--config", str(configs["rank"]))
    doc = json.loads(out)
    assert doc["hankel"]["rank"] == 2 and doc["hankel"]["stabilized"]
    assert doc["lie_le_hankel"]


def test_realize_artifact_reloads(configs, tmp_path, capsys):
    out_path = tmp_path / "r.json"
    assert run(capsys, "realize", "--config", str(configs["realize"]), "--out", str(out_path))[0] == 0
    r = LinearRealization.from_json(json.loads(out_path.read_text()))
    assert r.dim == 2
    assert series_of(r, 6) == count_a(6)


def test_realization_as_state_space(configs, tmp_path, capsys):
    out_path = tmp_path / "r.json"
    run(capsys, "realize", "--config", str(configs["realize"]), "--out", str(out_path))
    doc = {
        "alphabet": {"pids": ["1"], "labels": ["lo", "hi"], "generators": ["a", "b"]},
        "space": {"kind": "realization", "path": "r.json"},
        "learning_set": {"1": {"label": "lo", "state": [1, 0]}},
        "classifier": {"kind": "constant", "label": "lo"},
        "horizon": 1,
    }
    cfg = tmp_path / "sim.json"
    cfg.write_text(json.dumps(doc))
    code, out, err = run(capsys, "simulate", "--config", str(cfg))
    assert code == 0, err
    p = formats.loads_series(out)
    assert evaluate(p, ()) == 1 and evaluate(p, (("1", "hi", "a"),)) == 0


def test_nerode_dfa_reloads(configs, capsys):
    _, out, _ = run(capsys, "nerode", "--config", str(configs["nerode"]))
    dfa = Dfa.from_json(json.loads(out)["dfa"])
    assert dfa.n_states == 3
    assert dfa.accepts(("b", "a", "b")) and not dfa.accepts(("b", "a"))


def test_verify_detects_single_fault(configs, tmp_path, capsys):
    p = formats.load_series(tmp_path / "target.jsonl")
    word = (("1", "b", "t"),)
    table = dict(p.table)
    table[word] = evaluate(p, word) + Fraction(1, 4)
    formats.save_series(type(p).labeled(FIX, 2, table), tmp_path / "bad.jsonl")
    cfg = json.loads(configs["verify"].read_text())
    cfg["series"] = "bad.jsonl"
    configs["verify"].write_text(json.dumps(cfg))
    code, out, _ = run(capsys, "verify", "--config", str(configs["verify"]))
    doc = json.loads(out)
    assert code == 2
    assert doc["violations"] and len(doc["violations"]) == 1
    assert doc["violations"][0]["word"] == [list(word[0])]


def test_fit_finds_exact(configs, capsys):
    _, out, _ = run(capsys, "fit", "--config", str(configs["fit"]))
    doc = json.loads(out)
    assert doc["search"]["value"] == 0.0
    assert doc["active_parameters"]["active"] == [0]


def test_fit_active_needs_seed(configs, capsys):
    cfg = json.loads(configs["fit"].read_text())
    del cfg["active"]["seed"]
    configs["fit"].write_text(json.dumps(cfg))
    code, _, err = run(capsys, "fit", "--config", str(configs["fit"]))
    assert code == 1 and "seed" in json.loads(err)["message"]


def test_decompose_and_simulate_agree(configs, capsys):
    _, sim, _ = run(capsys, "simulate", "--config", str(configs["simulate"]))
    _, dec, _ = run(capsys, "decompose", "--config", str(configs["decompose"]))
    p = formats.loads_series(sim)
    doc = json.loads(dec)
    assert doc["consistent"]
    assert {tuple(tuple(e) for e in r["word"]): r["coeff"] for r in doc["total"]} == {
        w: f"{c.numerator}/{c.denominator}" for w, c in p.items()
    }


@pytest.mark.parametrize(
    "text, kind",
    [("{bad json", "FormatError"), ("[]", "FormatError"), ('{"max_prefix": 1}', "FormatError")],
)
def test_bad_input_exit_1(tmp_path, capsys, text, kind):
    cfg = tmp_path / "c.json"
    cfg.write_text(text)
    code, out, err = run(capsys, "rank", "--config", str(cfg))
    assert code == 1 and out == ""
    doc = json.loads(err)
    assert set(doc) == {"error", "message"}
    assert doc["error"] == kind


def test_missing_file_exit_1(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"series": "nope.jsonl", "max_len": 2}))
    code, _, err = run(capsys, "realize", "--config", str(cfg))
    assert code == 1 and json.loads(err)["error"] == "FileNotFoundError"


def test_regular_not_regular_exit_2(tmp_path, capsys):
    # a -> p is zero on the empty word but not on "a": the rank has not settled
    from seriesreal.series import TruncatedSeries
    from conftest import TWO_PID

    e = ("1", "a", "a")
    p = TruncatedSeries.labeled(TWO_PID, 4, {(e, e): 1})
    formats.save_series(p, tmp_path / "p.jsonl")
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"series": "p.jsonl", "bracket_depth": 1, "eval_len": 1}))
    code, out, _ = run(capsys, "regular", "--config", str(cfg))
    assert code == 2 and json.loads(out)["regular"] is False


def test_console_script(configs):
    proc = subprocess.run(
        [sys.executable, "-m", "seriesreal.cli", "rank", "--config", str(configs["rank"])],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["hankel"]["rank"] == 2
