import csv
import io
import json
import subprocess
import sys

import pytest

from nlgames.cli import run
from nlgames.game import read_game
from nlgames.generators import chsh, odd_cycle


@pytest.fixture
def games(tmp_path):
    paths = {}
    for name, extra in (("chsh", []), ("odd-cycle", ["--n", "5"]), ("magic-square", [])):
        path = tmp_path / f"{name}.json"
        strategy = tmp_path / f"{name}.strategy.json"
        assert run(["generate", name, *extra, "--out", str(path), "--strategy", str(strategy)]) == 0
        paths[name] = path
        paths[name + "-strategy"] = strategy
    return paths


def invoke(capsys, *argv):
    code = run(list(map(str, argv)))
    out, err = capsys.readouterr()
    return code, out, err


def test_generate_to_stdout(capsys):
    code, out, _ = invoke(capsys, "generate", "chsh")
    assert code == 0
    doc = json.loads(out)
    assert doc["nS"] == 2 and doc["predicate"]["type"] == "xor"


def test_generated_files_round_trip(games):
    assert read_game(games["chsh"]) == chsh()
    assert read_game(games["odd-cycle"]) == odd_cycle(5)


def test_classical_value(capsys, games):
    code, out, _ = invoke(capsys, "classical-value", games["chsh"])
    doc = json.loads(out)
    assert code == 0 and doc["valueExact"] == "3/4" and doc["value"] == 0.75
    assert {"strategy", "workFactor"} <= set(doc)
    _, out, _ = invoke(capsys, "classical-value", games["magic-square"])
    assert json.loads(out)["valueExact"] == "17/18"


def test_classical_value_cap(capsys, games):
    code, _, err = invoke(capsys, "classical-value", games["magic-square"], "--cap", "10")
    assert code == 1 and "SearchSpaceTooLarge" in err


def test_quantum_value(capsys, games):
    code, out, _ = invoke(capsys, "quantum-value", games["chsh"], "--seed", 3, "--restarts", 4)
    doc = json.loads(out)
    assert code == 0
    assert doc["value"] == pytest.approx(0.8535533905932737, abs=1e-9)
    assert doc["gap"] < 1e-8
    assert {"value", "dualBound", "gap", "vectors"} <= set(doc)


def test_quantum_value_refuses_non_xor(capsys, games):
    code, out, err = invoke(capsys, "quantum-value", games["magic-square"])
    assert code == 1 and out == "" and "NotXorGame" in err


def test_byte_identical_with_seed(capsys, games):
    outs = [invoke(capsys, "quantum-value", games["odd-cycle"], "--seed", 11)[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_simulate(capsys, games):
    code, out, _ = invoke(capsys, "simulate", games["magic-square"], games["magic-square-strategy"])
    doc = json.loads(out)
    assert code == 0 and doc["winProbability"] == pytest.approx(1.0, abs=1e-10)
    assert len(doc["perPair"]) == 18


def test_round(capsys, games, tmp_path):
    code, out, _ = invoke(capsys, "round", games["chsh"], "--samples", 500)
    doc = json.loads(out)
    assert code == 0 and doc["bestValueExact"] == "3/4"
    assert doc["expectation"] == pytest.approx(0.75, abs=1e-9)
    # the solver's output document can be fed back as the vectors file
    solved = tmp_path / "solved.json"
    assert run(["quantum-value", str(games["chsh"]), "--out", str(solved)]) == 0
    code, out2, _ = invoke(capsys, "round", games["chsh"], "--vectors", solved, "--samples", 500)
    assert code == 0 and json.loads(out2)["bestValueExact"] == "3/4"


def test_reduce_and_lift_then_simulate(capsys, games, tmp_path):
    solved = tmp_path / "solved.json"
    assert run(["quantum-value", str(games["chsh"]), "--out", str(solved)]) == 0
    code, out, _ = invoke(capsys, "reduce", solved, "--epsilon", 0.05)
    doc = json.loads(out)
    assert code == 0 and doc["report"]["draws"] == 0
    code, out, _ = invoke(capsys, "reduce", solved, "--force-projection", "--epsilon", 0.09)
    doc = json.loads(out)
    assert code == 0 and doc["report"]["worstDistortion"] <= 0.09 and doc["vectors"]["m"] % 2 == 0
    code, _, err = invoke(capsys, "reduce", solved, "--epsilon", 0.2)
    assert code == 1 and "EpsilonOutOfRange" in err

    lifted = tmp_path / "lifted.json"
    assert run(["lift", str(solved), "--out", str(lifted)]) == 0
    code, out, _ = invoke(capsys, "simulate", games["chsh"], lifted)
    assert json.loads(out)["winProbability"] == pytest.approx(0.8535533905932737, abs=1e-9)


def test_check_bounds(capsys, games):
    code, out, _ = invoke(capsys, "check-bounds", games["chsh"])
    doc = json.loads(out)
    assert code == 0 and doc["verdicts"] == {"gBound": "PASS", "grothendieck": "PASS"}
    assert doc["ratio"] == pytest.approx(2 ** 0.5, abs=1e-6)
    code, out, _ = invoke(capsys, "check-bounds", games["chsh"], games["odd-cycle"], "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 2
    assert all(r["gBoundVerdict"] == "PASS" for r in rows)


def test_csv_format(capsys, games):
    code, out, _ = invoke(capsys, "classical-value", games["chsh"], "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows[0]["valueExact"] == "3/4"


def test_tolerance_override(capsys, games):
    code, _, _ = invoke(capsys, "simulate", games["chsh"], games["chsh-strategy"], "--tol", "state_norm=1e-3")
    assert code == 0
    code, _, _ = invoke(capsys, "simulate", games["chsh"], games["chsh-strategy"], "--tol", "nonsense=1")
    assert code == 2


def test_usage_errors(capsys, tmp_path):
    assert invoke(capsys, "frobnicate")[0] == 2
    assert invoke(capsys)[0] == 2
    assert invoke(capsys, "generate", "not-a-game")[0] == 2
    code, _, err = invoke(capsys, "classical-value", tmp_path / "missing.json")
    assert code == 1 and err
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code, _, err = invoke(capsys, "classical-value", bad)
    assert code == 1 and "ParseError" in err


def test_generate_without_builtin_strategy(capsys, tmp_path):
    code, _, err = invoke(capsys, "generate", "cycle-coloring", "--n", 5, "--strategy", tmp_path / "s.json")
    assert code == 1 and "no built-in" in err


def test_verify_paper(capsys):
    code, out, _ = invoke(capsys, "verify-paper")
    lines = out.strip().splitlines()
    assert code == 0
    assert len(lines) == 11
    assert all(": PASS (" in line for line in lines)


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "nlgames.cli", "generate", "odd-cycle", "--n", "3"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["nS"] == 3
