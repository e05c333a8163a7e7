import json
import math

import pytest

from spindle.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_limits_circle(capsys):
    code, out, err = run(capsys, "limits", "--body", "disc:1", "--r", "1", "--model", "circle")
    assert code == 0
    doc = json.loads(out)
    assert doc["limits"]["c_f0"] == pytest.approx(math.pi ** 2 / 2)
    assert doc["metadata"]["config"]["model"] == "circle"
    assert err.startswith("config: ")


def test_simulate_infeasible_exit_2(capsys):
    code, out, err = run(capsys, "simulate", "--body", "ellipse:0.6,0.5", "--r", "0.7",
                         "--model", "inscribed", "--n", "100")
    assert code == 2
    last = err.strip().splitlines()[-1]
    assert last.startswith("ERROR INFEASIBLE: ") and "r_M = 0.72" in last


def test_hull_two_points(tmp_path, capsys):
    p = tmp_path / "two_points.csv"
    p.write_text("x,y\n0,0\n0.5,0.2\n")
    code, out, _ = run(capsys, "hull", "--input", str(p), "--r", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["f0"] == 2 and len(doc["vertices"]) == 2
    code, out, _ = run(capsys, "hull", "--input", str(p), "--r", "1", "--oracle")
    assert json.loads(out)["f0"] == 2


def test_hull_errors(tmp_path, capsys):
    p = tmp_path / "far.csv"
    p.write_text("0,0\n3,0\n")
    code, _, err = run(capsys, "hull", "--input", str(p), "--r", "1")
    assert code == 2 and "ERROR NOT_R_FEASIBLE" in err
    code, _, err = run(capsys, "hull", "--input", str(tmp_path / "missing.csv"), "--r", "1")
    assert code == 2 and "ERROR" in err


def test_unknown_flag_rejected(capsys):
    code, _, err = run(capsys, "limits", "--body", "disc:1", "--r", "1", "--bogus", "3")
    assert code == 2 and "ERROR USAGE" in err


def test_bad_body_spec(capsys):
    code, _, err = run(capsys, "limits", "--body", "disc:1x", "--r", "1")
    assert code == 2 and "ERROR BODY_SPEC" in err and "position 6" in err


def test_numeric_failure_exit_3(capsys):
    code, _, err = run(capsys, "caps", "--body", "ellipse:0.6,0.5", "--r", "1", "--theta", "0", "--t", "5")
    assert code == 3 and "ERROR NO_INTERSECTION" in err


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"body": "disc:0.4", "r": 1.0, "model": "circumscribed"}))
    code, out, _ = run(capsys, "limits", "--config", str(cfg))
    assert code == 0 and json.loads(out)["limits"]["model"] == "circumscribed"
    code, out, _ = run(capsys, "limits", "--config", str(cfg), "--model", "inscribed")
    assert json.loads(out)["limits"]["model"] == "inscribed"
    cfg.write_text(json.dumps({"body": "disc:0.4", "r": 1.0, "colour": "red"}))
    code, _, err = run(capsys, "limits", "--config", str(cfg))
    assert code == 2 and "ERROR CONFIG" in err


def test_caps_and_dual_check(capsys):
    code, out, _ = run(capsys, "caps", "--body", "ellipse:0.6,0.5", "--r", "1", "--theta", "0.3", "--t", "1e-5")
    doc = json.loads(out)
    assert code == 0
    assert doc["ratio_length"] == pytest.approx(1, abs=1e-3)
    assert doc["jacobian_fd"] == pytest.approx(doc["jacobian_closed"], rel=1e-5)
    code, out, _ = run(capsys, "dual-check", "--body", "cw:1,0.03", "--r", "1")
    doc = json.loads(out)
    assert max(doc["residuals"].values()) < 1e-8 and "constant_width" in doc
    code, out, _ = run(capsys, "dual-check", "--body", "ellipse:0.6,0.5", "--r", "1")
    assert "constant_width" not in json.loads(out)


def test_simulate_then_variance_scan(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("SPINDLE_WORKERS", "2")
    csv_path = tmp_path / "s.csv"
    code, _, err = run(capsys, "simulate", "--body", "disc:1", "--r", "1", "--model", "circle",
                       "--n", "10,100,1000,10000", "--reps", "20", "--seed", "4", "--out", str(csv_path))
    assert code == 0 and '"workers": 2' in err
    text = csv_path.read_text()
    assert text.startswith("# ") and '"seed": 4' in text.splitlines()[0]
    code, out, _ = run(capsys, "variance-scan", "--input", str(csv_path), "--field", "var_f0")
    doc = json.loads(out)
    assert code == 0
    assert doc["fits"][0]["field"] == "var_f0" and doc["source"]["config"]["seed"] == 4


def test_lln(capsys):
    code, out, _ = run(capsys, "lln", "--body", "disc:1", "--r", "1", "--model", "circle", "--n-max", "256")
    rows = json.loads(out)["trajectory"]
    assert code == 0 and rows[-1]["n"] == 256
