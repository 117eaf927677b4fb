import io
import json
from pathlib import Path

import numpy as np
import pytest

from pnspaces.cli import main

FIX = Path(__file__).parent / "fixtures"


def run(*argv, **kw):
    buf = io.StringIO()
    code = main([str(a) for a in argv], out=buf, **kw)
    return code, buf.getvalue()


def test_audit_ex25():
    code, out = run("audit", "--space", FIX / "ex25.json", "--samples", 5)
    rep = json.loads(out)
    assert code == 0 and rep["passed"] and rep["characteristic"] is True
    assert rep["grid"] == {"mesh": 2**-6, "x_max": 128.0, "tol_eq": 1e-9}


def test_audit_ex22_notes_non_characteristic():
    code, out = run("audit", "--space", FIX / "ex22.json", "--samples", 5)
    assert code == 0 and json.loads(out)["characteristic"] is False


def test_audit_bad_parameter(capsys):
    code, _ = run("audit", "--space", FIX / "ex22_bad_a.json")
    assert code == 2 and "a ∈ (0,1) violated" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["audit", "--space", FIX / "malformed.json"],
    ["audit", "--space", FIX / "missing.json"],
    ["audit"],
    ["nonsense"],
    ["quasi-inverse", "--phi", FIX / "phi_bad.json"],
    ["convolve", "--tau", "tauX", "--lhs", "ex25:1", "--rhs", "ex25:1"],
    ["convolve", "--tau", "tauM", "--lhs", "ex25:-1", "--rhs", "ex25:1"],
    ["paper-demo", "--mesh", "0"],
    ["probe", "compact", "--space", FIX / "ex25.json", "--set", FIX / "set_root_interval.json"],
])
def test_input_errors_exit_2(argv, capsys):
    code, _ = run(*argv)
    assert code == 2


def test_classify():
    code, out = run("classify", "--space", FIX / "ex25.json", "--set", FIX / "set_123.json")
    assert code == 0 and json.loads(out)["class"] == "PerhapsBounded"
    code, out = run("classify", "--space", FIX / "ex25.json", "--set", FIX / "set_naturals.json")
    assert json.loads(out)["class"] == "CertainlyUnbounded"


def test_classify_golden():
    _, out = run("classify", "--space", FIX / "ex25.json", "--set", FIX / "set_123.json")
    assert out == (FIX / "classify_ex25_123.golden.json").read_text()


def test_radius_csv(tmp_path):
    target = tmp_path / "r.csv"
    code, out = run("radius", "--space", FIX / "ex25.json", "--set", FIX / "set_123.json", "--format", "csv", "--csv", target)
    assert code == 0 and target.read_text() == out
    data = np.loadtxt(io.StringIO(out), delimiter=",", skiprows=1)
    assert np.max(np.abs(data[:, 1] - data[:, 0] / (data[:, 0] + 3))) <= 1e-9


def test_quasi_inverse_identity():
    code, out = run("quasi-inverse", "--phi", "identity")
    rep = json.loads(out)
    assert code == 0 and rep["bijective"] is True
    assert rep["phi_hat"]["knots"] == rep["phi"]["phi_knots"]
    assert rep["inequalities"]["passed"]


def test_convolve_tau_m(tmp_path):
    code, out = run("convolve", "--tau", "tauM", "--F", "ex25:1", "--G", "ex25:1", "--format", "csv", "--out", tmp_path / "h.json")
    assert code == 0
    data = np.loadtxt(io.StringIO(out), delimiter=",", skiprows=1)
    assert np.max(np.abs(data[:, 1] - data[:, 0] / (data[:, 0] + 2))) <= 1e-3
    assert "knots" in json.loads((tmp_path / "h.json").read_text())


def test_probes():
    code, out = run("probe", "absorb", "--space", FIX / "ex25.json", "--set", FIX / "set_123.json", "--n", 2)
    assert code == 0 and json.loads(out)["result"]["holds"] is True
    code, out = run("probe", "topo-bounded", "--space", FIX / "ex25.json", "--set", FIX / "set_naturals.json")
    assert code == 0 and json.loads(out)["result"]["holds"] is False
    code, out = run("probe", "compact", "--space", FIX / "ex25.json", "--set", FIX / "set_root_interval.json",
                    "--sequences", FIX / "sequences_sqrt3.json")
    res = json.loads(out)["result"]
    assert code == 0 and res["verdict"] == "counterexample to D-compactness"


def test_env_grid(monkeypatch):
    monkeypatch.setenv("PNSPACE_GRID", "mesh=0.03125,x_max=64")
    _, out = run("classify", "--space", FIX / "ex25.json", "--set", FIX / "set_123.json")
    assert json.loads(out)["grid"]["mesh"] == 0.03125
    _, out = run("classify", "--space", FIX / "ex25.json", "--set", FIX / "set_123.json", "--mesh", 0.0625)
    assert json.loads(out)["grid"] == {"mesh": 0.0625, "x_max": 64.0, "tol_eq": 1e-9}


def test_audit_deterministic():
    a = run("audit", "--space", FIX / "ex25.json", "--samples", 3, "--seed", 7)
    b = run("audit", "--space", FIX / "ex25.json", "--samples", 3, "--seed", 7)
    assert a == b


def test_paper_demo():
    code, out = run("paper-demo")
    assert code == 0 and json.loads(out)["ok"]
    assert run("paper-demo") == (code, out)


def test_paper_demo_coarse_mesh():
    assert run("paper-demo", "--mesh", 2**-5)[0] == 0


def test_paper_demo_wrong_formula(capsys):
    code, _ = run("paper-demo", radius_formula=lambda t, a, b: t / (t + min(abs(a), abs(b))))
    assert code == 1 and "radius equals" in capsys.readouterr().err
