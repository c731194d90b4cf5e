import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from movebound.cli import main
from movebound.defaults import TABLE_B
from movebound.special import airy_ai, airy_root


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_table_boundary_zeros(capsys):
    code, out, _ = run(capsys, "table", "--shift", "0")
    assert code == 0
    vals = [float(r["nu"]) for r in rows(out)]
    assert len(vals) == 10 and max(abs(v) for v in vals) <= 1e-8


def test_table_off_boundary(capsys):
    code, out, _ = run(capsys, "table", "--shift", "2")
    vals = np.array([float(r["nu"]) for r in rows(out)])
    assert np.max(np.abs(vals - TABLE_B)) <= 1e-4


def test_table_b2_8(capsys):
    code, out, _ = run(capsys, "table", "--b2", "8", "--shift", "0")
    data = rows(out)
    assert code == 0
    for r in data:
        assert float(r["x"]) == pytest.approx(-float(r["t"]) ** 3, abs=1e-15)
        assert abs(float(r["nu"])) <= 1e-8


def test_table_json(capsys):
    code, out, _ = run(capsys, "table", "--format", "json", "--steps", "3")
    doc = json.loads(out)
    assert doc["columns"] == ["i", "t", "x", "nu"]
    assert len(doc["rows"]) == 3
    assert doc["config"]["defaults_version"]


def test_table_rejects_zero_b2(capsys):
    code, _, err = run(capsys, "table", "--b2", "0")
    assert code == 2 and "b2" in err


@pytest.mark.parametrize("argv", [
    ("verify", "--case", "linear", "--b", "1"),
    ("verify", "--case", "airy"),
    ("verify", "--case", "cubic", "--b2", "-1"),
    ("verify", "--case", "pearcey"),
])
def test_verify_cases_pass(capsys, argv):
    code, out, _ = run(capsys, *argv)
    doc = json.loads(out)
    assert code == 0, [e for e in doc["checks"] if not e["passed"]]
    assert doc["passed"]


def test_verify_cubic_includes_tables(capsys):
    _, out, _ = run(capsys, "verify", "--case", "cubic", "--b2", "-1")
    names = {e["name"] for e in json.loads(out)["checks"]}
    assert {"table_zero", "table_values", "cubic_boundary_ode", "cu1", "cu2"} <= names


def test_verify_sqrt_family(capsys):
    code, out, _ = run(capsys, "verify", "--case", "theorem2", "--d0", "1", "--d1", "1",
                       "--c1", "0.5", "--C", "1", "--t-min", "1", "--t-max", "3")
    assert code == 0


def test_verify_sqrt_family_degenerate(capsys):
    code, _, err = run(capsys, "verify", "--case", "theorem2", "--d1", "2", "--c2", "-1")
    assert code == 2 and "DegenerateFamilyError" in err


def test_verify_failing_check_exit_1(capsys):
    code, out, _ = run(capsys, "verify", "--case", "linear", "--tol", "remark1=1e-30")
    assert code == 1
    doc = json.loads(out)
    failed = {e["name"] for e in doc["checks"] if not e["passed"]}
    assert failed and failed <= {"remark1_first", "remark1_second"}


def test_verify_unknown_tolerance(capsys):
    code, _, err = run(capsys, "verify", "--case", "linear", "--tol", "nope=1")
    assert code == 2


def test_verify_csv(capsys):
    code, out, _ = run(capsys, "verify", "--case", "linear", "--format", "csv")
    data = rows(out)
    assert code == 0 and all(r["passed"] == "1" for r in data)


def test_grid_shape(capsys):
    code, out, _ = run(capsys, "grid", "--case", "linear", "--nt", "3", "--nx", "3",
                       "--t-min", "0.5", "--t-max", "1")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "t,x,nu,nu_x" and len(lines) == 10


def test_grid_cubic_on_boundary(capsys):
    _, out, _ = run(capsys, "grid", "--case", "cubic", "--t-min", "0.2", "--t-max", "0.2",
                    "--nt", "1", "--x-min", "0.001", "--x-max", "0.001", "--nx", "1")
    assert abs(float(rows(out)[0]["nu"])) < 1e-10


def test_grid_airy_t0(capsys):
    _, out, _ = run(capsys, "grid", "--case", "airy", "--t-min", "0", "--t-max", "0",
                    "--nt", "1", "--nx", "5")
    data = rows(out)
    xs = np.array([float(r["x"]) for r in data])
    np.testing.assert_allclose([float(r["nu"]) for r in data], airy_ai(xs), rtol=1e-15)


def test_grid_rejects_t0_for_linear(capsys):
    code, _, _ = run(capsys, "grid", "--case", "linear", "--t-min", "0")
    assert code == 2


def test_grid_thread_count_does_not_change_output(capsys, monkeypatch):
    argv = ("grid", "--case", "cubic", "--nt", "6", "--nx", "11")
    monkeypatch.setenv("MOVEBOUND_THREADS", "1")
    _, one, _ = run(capsys, *argv)
    monkeypatch.setenv("MOVEBOUND_THREADS", "4")
    _, four, _ = run(capsys, *argv)
    assert one == four


def test_bad_thread_env(capsys, monkeypatch):
    monkeypatch.setenv("MOVEBOUND_THREADS", "many")
    code, _, _ = run(capsys, "grid", "--case", "linear", "--nt", "2", "--nx", "2")
    assert code == 2


def test_trace_linear(capsys):
    code, out, _ = run(capsys, "trace", "--case", "linear", "--t-min", "0.1", "--t-max", "1",
                       "--nt", "10")
    for r in rows(out):
        assert float(r["f"]) == pytest.approx(-float(r["t"]), abs=1e-9)


def test_trace_airy(capsys):
    xi = airy_root(1)
    _, out, _ = run(capsys, "trace", "--case", "airy", "--t-min", "0", "--t-max", "1",
                    "--nt", "5")
    for r in rows(out):
        t = float(r["t"])
        assert float(r["f"]) == pytest.approx(xi - t * t / 4, abs=1e-8)


def test_trace_cubic(capsys):
    _, out, _ = run(capsys, "trace", "--case", "cubic")
    for r in rows(out):
        t = float(r["t"])
        assert float(r["f"]) == pytest.approx(t ** 3 / 8, abs=1e-6)


def test_trace_lost_seed(capsys):
    code, out, err = run(capsys, "trace", "--case", "linear", "--x-seed", "25", "--t-min", "0.1")
    assert code == 1 and "error" in err
    assert out.startswith("t,f,df")


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# cubic with b2 = 8\nb2 = 8\nt-step = 0.1\nsteps = 3\n")
    _, out, _ = run(capsys, "table", "--config", str(cfg), "--steps", "2")
    data = rows(out)
    assert len(data) == 2
    assert float(data[1]["t"]) == pytest.approx(0.2)
    assert float(data[1]["x"]) == pytest.approx(-0.008)


def test_config_booleans_and_lists(capsys, tmp_path):
    cfg = tmp_path / "v.cfg"
    cfg.write_text("case = linear\nfd = false\ntol = remark1=1e-6, trace_linear=1e-9\n")
    code, out, _ = run(capsys, "verify", "--config", str(cfg))
    doc = json.loads(out)
    assert code == 0
    assert not any(e["name"].startswith("fd_") for e in doc["checks"])


def test_config_errors(capsys, tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("bogus = 1\n")
    assert run(capsys, "table", "--config", str(bad))[0] == 2
    noeq = tmp_path / "noeq.cfg"
    noeq.write_text("steps\n")
    assert run(capsys, "table", "--config", str(noeq))[0] == 2
    assert run(capsys, "table", "--config", str(tmp_path / "missing.cfg"))[0] == 2


def test_out_file(capsys, tmp_path):
    path = tmp_path / "t.csv"
    code, out, _ = run(capsys, "table", "--out", str(path))
    assert code == 0 and out == ""
    assert path.read_text().startswith("i,t,x,nu")


def test_byte_identical_subprocess(tmp_path):
    cmd = [sys.executable, "-m", "movebound", "grid", "--case", "pearcey", "--nt", "3",
           "--nx", "5", "--format", "json"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a
