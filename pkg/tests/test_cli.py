import json
from pathlib import Path

import pytest

from supergc.cli import main

SCEN = Path(__file__).resolve().parent.parent / "scenarios"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr()


def test_classi_passes_at_twenty_points(capsys):
    code, out = run(capsys, "check-classical", SCEN / "classi.json", "--points", 20)
    assert code == 0 and "overall: PASS" in out.out


def test_explicit_l27_passes(capsys):
    assert run(capsys, "check-gc", SCEN / "l27_explicit.json")[0] == 0


def test_tampered_scenario_fails(capsys):
    code, out = run(capsys, "check-gc", SCEN / "l27_tampered.json")
    assert code == 1
    assert "FAIL" in out.out and "gc_iii" in out.out


def test_adjoint_scenario(capsys):
    assert run(capsys, "adjoint", SCEN / "adjoint_k1_k2.json")[0] == 0


def test_brackets(capsys):
    assert run(capsys, "brackets", "susy")[0] == 0
    code, out = run(capsys, "brackets", "classical")
    assert code == 1 and "DISCREPANCY" in out.out


def test_catalog_verify_reports_repair(capsys):
    code, out = run(capsys, "catalog", "verify", "L39", "--points", 3, "--jet-order", 3)
    assert code == 1 and "repair b3" in out.out
    code, _ = run(capsys, "catalog", "verify", "l27'", "--points", 3)
    assert code == 0


def test_catalog_param_override(capsys):
    # k0 = 0 solves Gauss-Codazzi but flattens the mean curvature away
    code, out = run(capsys, "catalog", "verify", "classical-L17prime", "--param", "k0=0", "--points", 3)
    assert code == 1
    assert "PASS  gauss" in out.out and "FAIL  mean_curvature_nonzero" in out.out


def test_report_shape_and_determinism(capsys, tmp_path):
    outs = []
    for name in ("a.json", "b.json"):
        dest = tmp_path / name
        code, _ = run(capsys, "--seed", 7, "catalog", "verify", "L26doubleprime", "--points", 3, "--report", dest)
        assert code == 1
        outs.append(json.loads(dest.read_text()))
    assert outs[0]["per_check"] == outs[1]["per_check"]
    rep = outs[0]
    assert {"version", "mode", "seed", "pass", "per_check", "discrepancies"} <= set(rep)
    assert rep["seed"] == 7 and rep["pass"] is False
    assert all({"name", "max_residual", "pass"} <= set(c) for c in rep["per_check"])
    assert any(d["kind"] == "DISCREPANCY" for d in rep["discrepancies"])


def test_report_to_stdout(capsys):
    code, out = run(capsys, "check-classical", SCEN / "classi.json", "--report", "-")
    body = out.out[out.out.index("{"):]
    assert json.loads(body)["pass"] is True


@pytest.mark.parametrize(
    "doc",
    [
        {"version": 1, "mode": "susy-gc", "fields": {}, "colour": "red"},
        {"version": 2, "mode": "susy-gc", "fields": {}},
        {"version": 1, "mode": "nonsense"},
        {"version": 1, "mode": "susy-gc", "fields": {"H": "xp +* 2"}},
        {"version": 1, "mode": "susy-gc", "fields": {"Rplus": "xp"}},
        {"version": 1, "mode": "susy-gc", "fields": {"Bogus": "0"}},
    ],
)
def test_bad_scenarios_exit_2(capsys, tmp_path, doc):
    path = tmp_path / "s.json"
    path.write_text(json.dumps(doc))
    code, out = run(capsys, "run", path)
    assert code == 2 and "error" in out.err


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "check-gc", tmp_path / "missing.json")[0] == 2
    assert run(capsys, "check-gc", SCEN / "classi.json")[0] == 2
    assert run(capsys, "catalog", "verify", "nosuch")[0] == 2
    assert run(capsys, "catalog", "verify", "L39", "--param", "zz=1")[0] == 2
