import json
import subprocess
import sys

import numpy as np
import pytest

from neelwall.cli import main
from neelwall.profile import Grid, read_csv, read_profile, write_csv


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_minimize_prints_summary_and_writes_profile(capsys, tmp_path):
    prof = tmp_path / "p.json"
    code, out, _ = run(capsys, "minimize", "--h", "2", "--d", "1", "--L", "15", "--N", "301",
                       "--profile-out", str(prof))
    assert code == 0
    s = json.loads(out)
    assert s["converged"] and s["energy"]["total"] > 0
    p = read_profile(prof)
    assert p.degree == pytest.approx(1.0)
    # restart from the written profile converges immediately
    code, out2, _ = run(capsys, "minimize", "--h", "2", "--d", "1", "--L", "15", "--N", "301",
                        "--start", str(prof))
    assert code == 0
    assert json.loads(out2)["energy"]["total"] == pytest.approx(s["energy"]["total"], rel=1e-9)


def test_minimize_is_deterministic(capsys):
    args = ("minimize", "--h", "0.5", "--d", "a/pi", "--L", "15", "--N", "301")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b


def test_usage_errors_exit_2(capsys):
    assert run(capsys, "minimize", "--h", "1", "--d", "1")[0] == 2
    assert run(capsys, "minimize", "--h", "2", "--d", "a/pi+1")[0] == 2
    assert run(capsys, "minimize", "--h", "0.5", "--d", "0.3")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["minimize", "--h", "2"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["nope"])
    assert exc.value.code == 2


def test_numerical_failure_exit_1(capsys):
    code, _, err = run(capsys, "minimize", "--h", "2", "--d", "1", "--L", "15", "--N", "301",
                       "--max-iters", "3")
    assert code == 1
    info = json.loads(err.strip().splitlines()[-1])
    assert info["error"] == "numerical_failure"


def test_jobs_env_fallback(capsys, monkeypatch):
    monkeypatch.setenv("NEELWALL_JOBS", "many")
    code, _, _ = run(capsys, "scan", "--h", "2", "--d", "1", "--L", "10", "--N", "201")
    assert code == 2


def test_scan_csv(capsys, tmp_path):
    out = tmp_path / "scan.csv"
    code, _, _ = run(capsys, "scan", "--h", "2", "--d", "1,2", "--L", "15", "--N", "301",
                     "--jobs", "1", "--out", str(out))
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("h,d,L,N,total")
    assert len(lines) == 3
    assert lines[2].split(",")[-2] == "True"


def test_lambda_and_extension(capsys, tmp_path):
    grid = Grid(20.0, 401)
    src = tmp_path / "f.csv"
    write_csv(src, grid.x, np.exp(-grid.x ** 2), "f")
    dst = tmp_path / "lf.csv"
    assert run(capsys, "lambda", "--input", str(src), "--out", str(dst))[0] == 0
    x, v, _ = read_csv(dst)
    assert v[200] == pytest.approx(-2 / np.sqrt(np.pi), rel=1e-3)  # Lambda of e^{-x^2} at 0
    ext = tmp_path / "v.csv"
    assert run(capsys, "extension", "--input", str(src), "--x2", "0.5,1", "--out", str(ext))[0] == 0
    rows = ext.read_text().splitlines()
    assert rows[0] == "x1,x2,V" and len(rows) == 1 + 2 * 401
    assert run(capsys, "lambda", "--input", str(tmp_path / "missing.csv"))[0] == 1


def test_greens(capsys):
    code, out, _ = run(capsys, "greens", "--alpha", "1.5707963267948966", "--x", "1,2")
    assert code == 0
    assert "g" in out
    assert run(capsys, "greens", "--alpha", "3", "--x", "1")[0] == 2


def test_local(capsys):
    code, out, _ = run(capsys, "local", "--h", "0", "--N", "2001", "--T", "20")
    assert code == 0
    code, out, _ = run(capsys, "local", "--h", "2", "--probe-degree", "2", "--slopes", "10")
    assert code == 0
    assert json.loads(out)["connections"] == 0


def test_verify_single_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "energy")
    assert code == 0


def test_probe(capsys):
    code, out, _ = run(capsys, "probe", "--h", "2", "--d", "2", "--L", "10,20", "--dx", "0.1")
    assert code == 0
    assert json.loads(out)["signature"] in ("grows", "saturates", "inconclusive")


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "neelwall", "--help"], capture_output=True,
                       text=True)
    assert r.returncode == 0 and "minimize" in r.stdout
