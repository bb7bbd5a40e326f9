import json
import subprocess
import sys

import pytest

from krdens.cli import CommandResult, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_mu_json(capsys):
    code, out, _ = run(capsys, "mu", "--p", "3", "--a", "2", "--b", "0")
    assert code == 0
    data = json.loads(out)
    assert data["outputs"]["mu"] == "1"
    assert CommandResult.from_dict(data).to_dict() == data


def test_density_poly_round_trip(capsys):
    code, out, _ = run(capsys, "density-poly", "--p", "3", "--a", "1", "--b", "1", "--r", "1", "--check")
    assert code == 0
    data = json.loads(out)
    assert data["outputs"]["alpha_prime"] == "-16/3"
    assert data["outputs"]["F_at_1"] == "0"
    assert all(c["passed"] for c in data["checks"])


def test_text_format(capsys):
    code, out, _ = run(capsys, "tree", "--p", "3", "--m1", "2", "--m2", "2", "--d", "0", "--e", "0",
                       "--format", "text")
    assert code == 0
    assert "out.closed" in out and "-10" in out


def test_approx_is_labelled(capsys):
    _, out, _ = run(capsys, "density-general", "--p", "3", "--xi", "1,0", "--lam", "1,0", "--approx")
    data = json.loads(out)
    assert data["outputs"]["alpha"] == "16/3"
    assert data["outputs"]["approx (decimal, not exact)"]["alpha"] == pytest.approx(16 / 3)


def test_tree_dot(capsys, tmp_path):
    dot = tmp_path / "t.dot"
    code, out, _ = run(capsys, "tree", "--p", "3", "--m1", "1", "--m2", "3", "--d", "2", "--dot", str(dot))
    assert code == 0
    assert dot.read_text().startswith("graph")


def test_precondition_exit_code(capsys):
    code, out, err = run(capsys, "mu", "--p", "3", "--a", "1", "--b", "0")
    assert code == 2 and out == "" and "even" in err


def test_budget_exit_code(capsys):
    code, _, err = run(capsys, "oracle", "--p", "3", "--k", "3", "--S", "0,0", "--T", "1,1,0,0")
    assert code == 3 and "instance too large" in err


def test_oracle_stabilize(capsys):
    _, out, _ = run(capsys, "oracle", "--p", "3", "--S", "0,0", "--T", "1,1,0,0", "--stabilize")
    data = json.loads(out)
    assert data["outputs"]["density"] == "32/27"
    assert data["outputs"]["status"] == "stabilized"


def test_global_commands(capsys):
    _, out, _ = run(capsys, "diff", "--disc", "-4", "--level", "21", "--T", "1,1,0,0")
    assert json.loads(out)["outputs"]["diff"] == ["3", "7"]
    _, out, _ = run(capsys, "classnum", "--disc", "-23")
    assert json.loads(out)["outputs"]["h"] == "3"
    _, out, _ = run(capsys, "hilbert", "--a", "-1", "--b", "-1")
    assert json.loads(out)["outputs"]["symbols"] == {"2": "-1", "inf": "-1"}
    code, out, _ = run(capsys, "hilbert", "--random", "20", "--seed", "4")
    assert code == 0
    _, out, _ = run(capsys, "reps", "--disc", "-4", "--L", "1,1,0,0", "--T", "1,1,0,0")
    assert json.loads(out)["outputs"]["count"] == "32"
    _, out, _ = run(capsys, "localize", "--disc", "-4", "--T", "9,1,0,0", "--p", "3")
    assert json.loads(out)["outputs"]["mu"] == "1"


def test_identity_sweep(capsys):
    code, out, _ = run(capsys, "identity", "--p", "5", "--max", "6")
    assert code == 0
    assert json.loads(out)["outputs"]["all_pass"] is True


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "krdens", "mu", "--p", "5", "--a", "2", "--b", "2"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["outputs"]["mu"] == "-28"
