import json
import math
import subprocess
import sys

import pytest

from spheroconic.cli import main

U = 0.3
FOUR = [[math.sin(U), 0, math.cos(U)], [-math.sin(U), 0, math.cos(U)],
        [0, math.sin(U), math.cos(U)], [0, -math.sin(U), math.cos(U)]]


@pytest.fixture
def four(tmp_path):
    p = tmp_path / "four.json"
    p.write_text(json.dumps({"points": FOUR}))
    return str(p)


def run(capsys, *argv):
    status = main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def test_v0(capsys):
    status, out, _ = run(capsys, "v0")
    doc = json.loads(out)
    assert status == 0
    assert doc["v0"] == pytest.approx(0.685935, abs=1e-5)
    assert doc["R"] == pytest.approx(0.8791, abs=1e-4)
    assert doc["meta"]["command"] == "spheroconic v0"
    assert doc["meta"]["tolerances"] == {"tol": 1e-10}


def test_area(capsys):
    status, out, _ = run(capsys, "area", "--axes", "1,1")
    assert status == 0
    assert json.loads(out)["area"] == pytest.approx(2 * math.pi * (1 - 1 / math.sqrt(2)), abs=1e-10)
    status, out, _ = run(capsys, "area", "--conic", "0.0625,0.02777777777777778")
    assert json.loads(out)["conic"]["a"] == pytest.approx(6.0)


def test_solve_fixed_axes(capsys, four):
    status, out, _ = run(capsys, "solve", four, "--fixed-axes", "identity")
    res = json.loads(out)["result"]
    assert status == 0
    assert res["conic"]["a"] == pytest.approx(math.tan(U), rel=1e-9)
    assert res["conic"]["b"] == pytest.approx(math.tan(U), rel=1e-9)
    assert res["active_points"] == [0, 1, 2, 3]
    assert res["mode"] == "FixedAxes"


def test_solve_fixed_center_and_general(capsys, four):
    status, out, _ = run(capsys, "solve", four, "--fixed-center", "0,0,1")
    assert status == 0 and json.loads(out)["result"]["mode"] == "FixedCenter"
    status, out, _ = run(capsys, "solve", four, "--starts", "2")
    res = json.loads(out)["result"]
    assert status == 0 and res["mode"] == "General"
    assert res["certificate"]["verdict"] == "Unique"
    assert json.loads(out)["meta"]["seed"] == 0


def test_dual_solve(capsys, tmp_path):
    poles = [[-math.cos(0.4) * math.cos(f), -math.cos(0.4) * math.sin(f), math.sin(0.4)]
             for f in [2 * math.pi * k / 6 for k in range(6)]]
    p = tmp_path / "lines.json"
    p.write_text(json.dumps({"lines": poles}))
    status, out, _ = run(capsys, "dual-solve", str(p), "--fixed-center", "0,0,1")
    res = json.loads(out)["result"]
    assert status == 0 and res["objective"] == "measure"
    assert res["conic"]["a"] == pytest.approx(math.tan(0.4), rel=1e-6)


def test_example1_csv(capsys):
    status, out, _ = run(capsys, "example1", "--grid", "19")
    assert status == 0
    rows = [ln for ln in out.splitlines() if not ln.startswith("#")]
    assert rows[0] == "lambda,nu1,nu2,nu3_prenorm,area"
    areas = [float(r.split(",")[-1]) for r in rows[1:]]
    assert len(areas) == 19
    from spheroconic.area import area_from_axes
    a0 = area_from_axes(6, 4, 1e-12).area
    assert all(a > a0 for a in areas)


def test_sweep(capsys):
    status, out, _ = run(capsys, "sweep", "2,1", "2,1,0.7071067811865476,0,0,0.7071067811865476",
                         "--grid", "3")
    assert status == 0
    assert len([ln for ln in out.splitlines() if not ln.startswith("#")]) == 4


def test_certify(capsys, four):
    status, out, _ = run(capsys, "certify", "--conic", "100,100", "--rho", "0.05")
    assert status == 0 and json.loads(out)["certificate"]["verdict"] == "Unique"
    status, out, _ = run(capsys, "certify", "--conic", "0.0625,0.02777777777777778", "--points", four)
    cert = json.loads(out)["certificate"]
    assert cert["verdict"] == "Inconclusive"
    assert cert["rho_source"] == "inscribed_circle_radius"


def test_verify_lemmas(capsys):
    status, out, err = run(capsys, "verify-lemmas", "--samples", "2000")
    assert status == 0
    doc = json.loads(out)
    assert doc["meta"]["seed"] == 42
    assert "PASS lemma3: C < 0" in err
    strict, _, _ = run(capsys, "verify-lemmas", "--samples", "2000", "--strict")
    assert strict == (0 if doc["report"]["passed"] else 1)


def test_output_file_is_deterministic(capsys, tmp_path, four):
    # the command line is recorded in the metadata, so reuse one path
    out = tmp_path / "out.json"
    runs = []
    for _ in range(2):
        assert main(["solve", four, "--starts", "2", "--seed", "3", "-o", str(out)]) == 0
        runs.append(out.read_bytes())
    assert runs[0] == runs[1]
    assert capsys.readouterr().out == ""
    csv = tmp_path / "out.csv"
    runs = []
    for _ in range(2):
        main(["example1", "-o", str(csv)])
        runs.append(csv.read_bytes())
    assert runs[0] == runs[1]


def test_parse_error_exit_one(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"points": [[0.9, 0, 0], [0, 1, 0], [0, 0, 1]]}')
    status, _, err = run(capsys, "solve", str(p))
    doc = json.loads(err)
    assert status == 1
    assert doc["error"] == "ParseError" and doc["line"] == 1 and doc["column"] == 13


def test_degenerate_input_exit_one(capsys, tmp_path):
    p = tmp_path / "line.json"
    p.write_text(json.dumps({"points": [[1, 0, 0], [0, 1, 0], [0.6, 0.8, 0]]}))
    status, _, err = run(capsys, "solve", str(p))
    assert status == 1 and json.loads(err)["error"] == "DegenerateInput"


def test_center_outside_exit_one(capsys, four):
    status, _, err = run(capsys, "solve", four, "--fixed-center", "0.6,0,0.8")
    assert status == 1 and json.loads(err)["error"] == "CenterOutsideHull"


def test_usage_errors_exit_one(capsys):
    assert run(capsys, "solve")[0] == 1
    assert run(capsys, "nonsense")[0] == 1
    assert run(capsys, "area", "--axes", "1,1", "--tol", "-1")[0] == 1
    assert run(capsys, "area", "--axes", "1")[0] == 1
    assert run(capsys, "solve", "missing.json")[0] == 1


def test_internal_failure_exit_two(capsys, monkeypatch):
    from spheroconic import cli
    from spheroconic.errors import InternalInconsistency

    def boom(*a, **k):
        raise InternalInconsistency("routes disagree")

    monkeypatch.setattr(cli, "find_v0", boom)
    status, _, err = run(capsys, "v0")
    assert status == 2 and json.loads(err)["error"] == "InternalInconsistency"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "spheroconic.cli", "v0"], capture_output=True,
                          text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["v0"] == pytest.approx(0.685935, abs=1e-5)
