import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from zdecheck.cli import load_config, main, render_table


def _run(argv):
    out = io.StringIO()
    code = main(argv, stream=out)
    return code, out.getvalue()


def _read(path):
    return [json.loads(x) for x in path.read_text().splitlines()]


def test_constants_suite(tmp_path):
    code, text = _run(["run", "--suites", "constants", "--out", str(tmp_path)])
    assert code == 0
    recs = _read(tmp_path / "constants.jsonl")
    led = next(r for r in recs if r["name"] == "constants.ledger")["observed"]
    lo, hi = (Fraction(x) for x in led["alpha"])
    assert lo <= Fraction("7.93164376625223") and hi >= Fraction("7.93164376625222")
    assert all(r["verdict"] == "holds" for r in recs)
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary[0]["suite"] == "constants" and summary[0]["violated"] == 0
    assert "constants" in text


def test_sarkozy_constants_suite(tmp_path):
    code, _ = _run(["run", "--suites", "sarkozy-constants", "--out", str(tmp_path)])
    assert code == 0
    rec = next(r for r in _read(tmp_path / "sarkozy-constants.jsonl") if r["name"] == "sarkozy.kappa_gap")
    assert Fraction(rec["observed"]) == Fraction("1.32e-18")


def test_empty_suite_list(tmp_path):
    code, _ = _run(["run", "--suites", "", "--out", str(tmp_path)])
    assert code == 0
    assert list(tmp_path.glob("*.jsonl")) == []
    assert json.loads((tmp_path / "summary.json").read_text()) == []


@pytest.mark.parametrize("argv", [
    ["run", "--suites", "constants", "--q-max", "101"],
    ["run", "--suites", "constants", "--t-max", "150"],
    ["run", "--suites", "no-such-suite"],
    ["run", "--suites", "constants", "--seed-no-such-suite", "3"],
    ["run", "--suites", "constants", "--seed-powersum", "x"],
    ["run", "--bogus"],
    ["frobnicate"],
])
def test_usage_errors(argv, tmp_path):
    code, _ = _run(argv + ["--out", str(tmp_path)] if argv[0] == "run" else argv)
    assert code == 2


def test_config_file_and_overrides(tmp_path, monkeypatch):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# desk run\nsuites = sarkozy-search\nq_max = 10\nseed.powersum = 4\n")
    assert load_config(cfg) == {"suites": ["sarkozy-search"], "q_max": 10, "seeds": {"powersum": 4}}
    monkeypatch.setenv("ZDECHECK_OUT", str(tmp_path / "from-env"))
    code, _ = _run(["run", "--config", str(cfg)])
    assert code == 0 and (tmp_path / "from-env" / "sarkozy-search.jsonl").exists()
    code, _ = _run(["run", "--config", str(cfg), "--out", str(tmp_path / "flag")])
    assert code == 0 and (tmp_path / "flag" / "sarkozy-search.jsonl").exists()
    bad = tmp_path / "bad.cfg"
    bad.write_text("suites = constants\nwhat = 3\n")
    assert _run(["run", "--config", str(bad)])[0] == 2


def test_determinism(tmp_path):
    args = ["run", "--suites", "sieve,powersum", "--samples", "50", "--seed-sieve", "3", "--seed-powersum=5"]
    assert _run(args + ["--out", str(tmp_path / "a")])[0] == 0
    assert _run(args + ["--out", str(tmp_path / "b")])[0] == 0
    for name in ("sieve.jsonl", "powersum.jsonl"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    other = ["run", "--suites", "sieve", "--samples", "50", "--seed-sieve", "4", "--out", str(tmp_path / "c")]
    assert _run(other)[0] == 0
    assert (tmp_path / "a" / "sieve.jsonl").read_bytes() != (tmp_path / "c" / "sieve.jsonl").read_bytes()


def _cert(verdict, name="lem:turan"):
    return json.dumps({"name": name, "inputs": {}, "verdict": verdict, "observed": 0, "bound": 1, "notes": ""})


def test_report_one_row(tmp_path):
    b = tmp_path / "one.jsonl"
    b.write_text(_cert("holds") + "\n")
    code, text = _run(["report", str(b)])
    assert code == 0
    assert len(text.strip().splitlines()) == 3  # header, rule, one row
    assert _run(["report", str(b)])[1] == text


def test_report_flags_violation(tmp_path):
    b = tmp_path / "bad.jsonl"
    b.write_text(_cert("holds") + "\n" + _cert("violated", "cor:turan3") + "\n")
    code, text = _run(["report", str(b)])
    assert code == 1
    row = next(x for x in text.splitlines() if "cor:turan3" in x)
    assert row.startswith("!!")


def test_report_malformed(tmp_path, capsys):
    b = tmp_path / "broken.jsonl"
    b.write_text(_cert("holds") + "\n{not json\n")
    assert _run(["report", str(b)])[0] == 2
    assert "broken.jsonl:2" in capsys.readouterr().err
    assert _run(["report", str(tmp_path / "missing")])[0] == 2


def test_report_on_run_bundle(tmp_path):
    _run(["run", "--suites", "sarkozy-constants,sarkozy-search", "--out", str(tmp_path)])
    code, text = _run(["report", str(tmp_path)])
    assert code == 0
    names = {r["name"] for f in tmp_path.glob("*.jsonl") for r in _read(f)}
    assert sum(1 for line in text.splitlines()[2:] if line.strip()) == len(names)


def test_subcommands(capsys):
    code, text = _run(["sarkozy", "search", "--N", "4", "--method", "exhaustive"])
    assert code == 0 and json.loads(text) == [1, 4]
    code, text = _run(["sarkozy", "search", "--N", "10", "--csv"])
    assert code == 0 and text.splitlines()[0] == "N,size,density" and len(text.splitlines()) == 11
    assert _run(["sarkozy", "search", "--N", "41", "--method", "exhaustive"])[0] == 2
    code, text = _run(["powersum", "sweep", "--count", "100", "--seed", "2"])
    assert code == 0 and len(text.splitlines()) == 2
    code, text = _run(["sieve", "check", "--Q", "3", "--T", "5", "--count", "10"])
    assert code == 0 and len(text.splitlines()) == 20
    assert _run(["sieve", "check", "--Q", "30"])[0] == 2
    code, text = _run(["verify", "--cert", "prop:pre-Sarkozy.c"])
    assert code == 0 and json.loads(text.splitlines()[0])["verdict"] == "holds"
    assert _run(["verify", "--cert", "nothing:here", "--q-max", "3", "--t-max", "15", "--samples", "5"])[0] == 2
    code, text = _run(["constants"])
    assert code == 0 and "constants.alpha" in text


def test_render_table_deterministic():
    recs = [("s", {"name": "b", "verdict": "holds"}), ("s", {"name": "a", "verdict": "not_applicable"})]
    assert render_table(recs) == render_table(list(reversed(recs)))


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "zdecheck", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "run" in r.stdout
