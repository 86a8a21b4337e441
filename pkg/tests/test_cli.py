import json
import os
import subprocess
import sys

import pytest

from thorp.cli import run


def _doc(capsys, argv, code=0):
    assert run(argv) == code
    return json.loads(capsys.readouterr().out)


def test_mix_d1(capsys):
    doc = _doc(capsys, ["mix", "--d", "1"])
    assert doc["summary"]["mixing_time"] == 1
    assert doc["ok"] and doc["conventions"] == ["L1-unhalved", "log-natural"]
    assert doc["config"] == {"d": 1, "extra_rounds": 0, "seed": 0, "threshold": 0.25}


def test_mix_d2_records(capsys):
    doc = _doc(capsys, ["mix", "--d", "2"])
    l1 = [r["l1"] for r in doc["records"]]
    assert l1 == pytest.approx([23 / 12, 5 / 3, 2 / 3, 1 / 3, 1 / 6], abs=1e-15)
    assert doc["records"][0]["tv_halved"] == pytest.approx(23 / 24)


def test_capacity_exit_code(capsys):
    assert run(["mix", "--d", "9"]) == 2
    err = capsys.readouterr().err
    assert "d <= 3" in err and "limit" in err


@pytest.mark.parametrize("argv", [
    ["mix"],
    ["mix", "--d", "x"],
    ["nope"],
    ["couple", "--d", "2", "--T", "1", "--geometric"],
    ["mix", "--d", "2", "--format", "xml"],
])
def test_bad_arguments(argv, capsys):
    assert run(argv) == 2
    assert "usage:" in capsys.readouterr().err


def test_domain_error_exit_code(capsys):
    assert run(["mix", "--d", "2", "--threshold", "0"]) == 2
    assert run(["couple", "--d", "2", "--T", "1", "--exhaustive"]) == 0
    capsys.readouterr()
    assert run(["couple", "--d", "5", "--T", "1", "--exhaustive"]) == 2


def test_entropy_decay(capsys):
    doc = _doc(capsys, ["entropy-decay", "--d", "2", "--rounds", "6"])
    ents = [r["entropy"] for r in doc["records"]]
    assert len(ents) == 7
    assert all(b <= a + 1e-12 for a, b in zip(ents, ents[1:]))


def test_contract(capsys):
    doc = _doc(capsys, ["contract", "--d", "2", "--samples", "6", "--seed", "1"])
    assert doc["summary"]["strict"] and doc["summary"]["c_hat"] > 0
    assert len(doc["records"]) == 6


def test_pair(capsys):
    doc = _doc(capsys, ["pair", "--d", "1", "2", "3"])
    assert doc["summary"]["mixing_times"] == {"1": 1, "2": 4, "3": 5}
    for chk in doc["summary"]["checks"].values():
        assert chk["row_sum"] <= 1e-12 and chk["stationarity"] <= 1e-12


def test_couple_single_and_geometric(capsys):
    doc = _doc(capsys, ["couple", "--d", "3", "--T", "1", "--seed", "4"])
    trace = doc["summary"]["trace"]
    assert trace["X"][0] == list(range(8)) and len(trace["X"]) == 4
    doc = _doc(capsys, ["couple", "--d", "3", "--geometric", "--seed", "4"])
    assert doc["summary"]["trace"]["T"] >= 1


def test_couple_exhaustive(capsys):
    doc = _doc(capsys, ["couple", "--d", "2", "--T", "2", "--exhaustive"])
    s = doc["summary"]
    assert s["tables"] == s["valid_replay"] == s["display_match"] == s["involution"] == 16
    assert s["same_law"]


def test_lemmas_pinsker_conventions(capsys):
    base = ["lemmas", "--trials", "1000", "--seed", "7", "--chain-trials", "20",
            "--dent-trials", "100"]
    doc = _doc(capsys, base, code=1)
    by_suite = {r["suite"]: r for r in doc["records"]}
    assert by_suite["pinsker"]["violations"] == 1000
    assert all(r["violations"] == 0 for s, r in by_suite.items() if s != "pinsker")
    doc = _doc(capsys, base + ["--pinsker-convention", "halved"])
    assert doc["ok"] and doc["summary"]["violations"] == 0


def test_csv_and_out(tmp_path, capsys):
    out = tmp_path / "mix.csv"
    assert run(["mix", "--d", "2", "--format", "csv", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    lines = out.read_text().splitlines()
    assert lines[0] == "# tool: thorp"
    header = next(i for i, ln in enumerate(lines) if not ln.startswith("#"))
    assert lines[header] == "round,l1,tv_halved,entropy"
    assert len(lines) - header - 1 == 5


def test_timing_flag(capsys):
    assert "runtime_s" not in _doc(capsys, ["mix", "--d", "1"])
    assert _doc(capsys, ["mix", "--d", "1", "--timing"])["runtime_s"] >= 0


def _cli(args, seed):
    env = dict(os.environ, THORP_SEED=str(seed))
    return subprocess.run([sys.executable, "-m", "thorp", *args], env=env,
                          capture_output=True, check=False)


@pytest.mark.parametrize("args", [
    ["contract", "--d", "2", "--samples", "8"],
    ["couple", "--d", "3", "--geometric"],
    ["lemmas", "--trials", "200", "--chain-trials", "5", "--dent-trials", "20",
     "--pinsker-convention", "halved"],
])
def test_byte_identical_reruns(args):
    a, b = _cli(args, 42), _cli(args, 42)
    assert a.returncode == 0
    assert a.stdout == b.stdout
    assert json.loads(a.stdout)["config"]["seed"] == 42
    assert _cli(args, 43).stdout != a.stdout
