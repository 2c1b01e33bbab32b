import json
import subprocess
import sys

import pytest

from octoewl.cli import main
from octoewl.gamefile import parse_game


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def structured(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "structured")
    return code, json.loads(out)


def test_simulate_all_n(capsys):
    code, doc = structured(capsys, "simulate", "dilemma_3p", "-s", "N")
    assert code == 0
    assert doc["closed_form"][0] == pytest.approx(1.0)
    assert doc["schema_version"] == 1


def test_simulate_all_f(capsys):
    code, doc = structured(capsys, "simulate", "dilemma_3p", "-s", "F")
    assert code == 0
    assert doc["closed_form"][doc["outcomes"].index("FFF")] == pytest.approx(1.0)


def test_simulate_random_seed(capsys):
    code, doc = structured(capsys, "simulate", "dilemma_3p", "-s", "R", "--seed", "42")
    assert code == 0 and doc["linf"] <= 1e-9
    code, table, _ = run(capsys, "simulate", "dilemma_3p", "-s", "R", "--seed", "42")
    assert "L-inf distance" in table


def test_simulate_explicit_coefficients(capsys):
    code, doc = structured(capsys, "simulate", "zero_sum_2p", "-s", "0.6,0,0,0.8", "-s", "N")
    assert code == 0 and len(doc["closed_form"]) == 4


def test_exit_codes(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"players": 3}')
    assert run(capsys, "simulate", str(bad))[0] == 2
    assert run(capsys, "simulate", "dilemma_3p", "-s", "1,0,0,0.5")[0] == 3
    assert run(capsys, "simulate", "dilemma_3p", "-s", "N", "-s", "F")[0] == 2
    assert run(capsys, "simulate", "dilemma_3p", "-s", "x,y")[0] == 2
    assert run(capsys, "verify", "--vanishing", "--samples", "100")[0] == 1


def test_verify_fano(capsys):
    code, doc = structured(capsys, "verify", "--fano", "--samples", "1000")
    assert code == 0
    assert doc["checks"][0]["details"]["basis_pairs_agree"] == "64/64"


def test_verify_orthogonality(capsys):
    code, doc = structured(capsys, "verify", "--orthogonality")
    details = doc["checks"][0]["details"]
    assert code == 0
    assert details["gram_error_3p_canonical"]["value"] <= 1e-12
    assert details["max_offdiag_3p_probe"]["value"] > 1e-3


def test_verify_theorem1(capsys):
    code, doc = structured(capsys, "verify", "--theorem1", "--samples", "10000", "--seed", "7")
    assert code == 0
    assert doc["checks"][0]["details"]["haar_sweep_3p"]["value"] <= 1e-9


def test_verify_default_suite(capsys):
    code, out, _ = run(capsys, "verify", "--samples", "2000")
    assert code == 0
    assert out.count("[PASS]") == 5


def test_equilibrium_constant(capsys):
    code, doc = structured(capsys, "equilibrium", "constant_3p", "--samples", "2000")
    assert code == 0 and doc["confirmed"]
    assert max(abs(p["gain"]) for p in doc["players"]) <= 1e-9


def test_equilibrium_rejects_defect_profile(capsys):
    code, doc = structured(capsys, "equilibrium", "dilemma_3p", "-p", "F", "--samples", "2000")
    assert code == 1 and not doc["confirmed"]


def test_equilibrium_maximin(capsys):
    code, doc = structured(capsys, "equilibrium", "zero_sum_2p", "--maximin")
    assert code == 0
    assert doc["guaranteed_value"] == pytest.approx(doc["outcome_average"], abs=1e-8)
    assert doc["classical_mixed_value"] == pytest.approx(-1 / 3)


def test_payoff_command_round_trips(capsys):
    code, doc = structured(capsys, "payoff", "dilemma_3p", "--classical", "NFN", "--flip-probs", "0.5,0.5,0.5")
    assert code == 0
    assert doc["classical"]["payoffs"] == [2, 5, 2]
    assert doc["mixed_classical"]["payoffs"] == pytest.approx([2.5] * 3)
    assert parse_game(doc).n_players == 3


def test_global_flags_before_subcommand(capsys):
    code, doc = structured(capsys, "--seed", "42", "simulate", "dilemma_3p", "-s", "R")
    _, doc2 = structured(capsys, "simulate", "dilemma_3p", "-s", "R", "--seed", "42")
    assert doc == doc2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "octoewl", "simulate", "constant_3p"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "NNN" in res.stdout
