import json
import math
import subprocess
import sys

import pytest

from psiontic import circuit, ontology
from psiontic.cli import main


def run_cli(capsys, *argv):
    status = main(list(argv))
    out = capsys.readouterr()
    return status, out.out, out.err


def result(text):
    return json.loads(text)["result"]


def test_verify_quarter_pi(capsys):
    status, out, _ = run_cli(capsys, "verify", "--theta", "0.7853981634", "--n", "2")
    assert status == 0
    doc = json.loads(out)
    assert doc["result"]["max_forbidden_prob"] <= 1e-12
    assert doc["config"]["theta"] == 0.7853981634 and doc["config"]["seed"] == 0


def test_verify_failure_exit_code(capsys):
    status, out, _ = run_cli(capsys, "verify", "--theta", "1.0", "--n", "2", "--tol", "-1")
    assert status == 2
    assert result(out)["passed"] is False


def test_verify_csv(capsys):
    status, out, _ = run_cli(capsys, "verify", "--theta", "0.3", "--format", "csv")
    lines = out.splitlines()
    assert status == 0 and lines[0] == "x,outcome,probability" and len(lines) == 33


@pytest.mark.parametrize("eps, n, expected", [(0.001, 3, 0.8), (0.0, 5, 1.0)])
def test_bound(capsys, eps, n, expected):
    status, out, _ = run_cli(capsys, "bound", "--epsilon", str(eps), "--n", str(n))
    assert status == 0
    assert result(out)["D_lower"] == pytest.approx(expected, abs=1e-12)


def test_bound_checks_feasibility_when_theta_given(capsys):
    status, _, err = run_cli(capsys, "bound", "--epsilon", "0.01", "--n", "1", "--theta", "0.5")
    assert status == 1 and "InfeasibleError" in err


def test_min_n_and_degrees(capsys):
    _, out, _ = run_cli(capsys, "min-n", "--theta", "45", "--degrees")
    doc = json.loads(out)
    assert doc["result"]["min_n"] == 2
    assert doc["config"]["theta"] == pytest.approx(math.pi / 4)


def test_params(capsys):
    _, out, _ = run_cli(capsys, "params", "--theta", str(math.pi / 3))
    r = result(out)
    assert r["n"] == 2 and r["beta"] == pytest.approx(r["analytic_beta"], abs=1e-9)
    assert r["residual"] <= 1e-12


def test_twobox(capsys):
    status, out, _ = run_cli(capsys, "twobox")
    assert status == 0 and result(out)["passed"]


def test_sigma(capsys):
    status, out, _ = run_cli(capsys, "sigma", "--theta", str(math.pi / 3), "--n", "1", "--search-trials", "2000")
    r = result(out)
    assert status == 0
    assert r["sigma"] == pytest.approx(1 - math.sin(math.pi / 3), abs=1e-12)
    assert r["random_search_min"] >= r["sigma"] - 1e-6
    assert r["alpha"] == pytest.approx(math.pi)


def test_regions_csv(capsys, tmp_path):
    path = tmp_path / "regions.csv"
    status, out, _ = run_cli(capsys, "regions", "--grid-size", "8", "-o", str(path))
    assert status == 0 and out == ""
    lines = path.read_text().splitlines()
    assert lines[0] == "delta,n,omega_upper" and len(lines) == 33


def test_model_check(capsys, tmp_path):
    params = circuit.solve_params(math.pi / 4, 2)
    model, _ = ontology.make_reference_model("partial", math.pi / 4, params, q=0.5)
    path = tmp_path / "m.json"
    ontology.save_model(path, model)
    status, out, _ = run_cli(capsys, "model-check", str(path), "--theta", str(math.pi / 4), "--samples", "20000")
    r = result(out)
    assert status == 0
    assert r["response"] == "posterior" and r["D"] == pytest.approx(0.5)
    assert r["all_shared_frequency"] == pytest.approx(0.25, abs=4 * r["all_shared_stderr"])


def test_model_check_with_response_from_file(capsys, tmp_path):
    params = circuit.solve_params(math.pi / 3, 2)
    model, resp = ontology.make_reference_model("psi_ontic", math.pi / 3, params)
    path = tmp_path / "m.json"
    ontology.save_model(path, model, resp)
    status, out, _ = run_cli(capsys, "model-check", str(path), "--theta", str(math.pi / 3), "--samples", "0")
    r = result(out)
    assert status == 0 and r["response"] == "file" and r["epsilon"] <= 1e-12


@pytest.mark.parametrize("argv, message", [
    (["model-check", "/nonexistent.json", "--theta", "1"], "cannot read model file"),
    (["verify", "--theta", "2.0"], "invalid theta"),
    (["verify", "--theta", "0.5", "--n", "1"], "too small"),
    (["min-n"], "requires --theta"),
    (["twobox", "--format", "csv"], "only available"),
])
def test_input_errors_exit_1(capsys, argv, message):
    status, _, err = run_cli(capsys, *argv)
    assert status == 1 and message in err


def test_unknown_flag_exits_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--bogus"])
    assert exc.value.code == 1


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("PSIONTIC_SEED", "42")
    _, out, _ = run_cli(capsys, "twobox")
    assert json.loads(out)["config"]["seed"] == 42


def test_byte_identical_output(capsys):
    argv = ["sigma", "--theta", "0.4", "--n", "2", "--search-trials", "300", "--seed", "9"]
    _, first, _ = run_cli(capsys, *argv)
    _, second, _ = run_cli(capsys, *argv)
    assert first == second


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "psiontic", "min-n", "--theta", "0.3"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["result"]["min_n"] == 5
