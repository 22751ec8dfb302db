"""End-to-end CLI checks driven through subprocess."""

import json
import os
import subprocess
from pathlib import Path

import pytest

CLI = os.environ.get("LEVYHT_CLI_BIN")
pytestmark = pytest.mark.skipif(CLI is None, reason="LEVYHT_CLI_BIN not set")


def run(args, cwd):
    return subprocess.run([CLI, *args], cwd=cwd, capture_output=True, text=True)


def test_simulate_bm_writes_path_and_manifest(tmp_path):
    res = run(["simulate", "--set", "kind=bm", "--set", "horizon=1", "--set", "dt=0.01",
               "--out", "run"], tmp_path)
    assert res.returncode == 0
    lines = (tmp_path / "run" / "path.csv").read_text().splitlines()
    assert lines[0] == "time,value,is_jump"
    assert len(lines) == 102  # header + 101 grid rows
    manifest = json.loads((tmp_path / "run" / "manifest.json").read_text())
    assert manifest["subcommand"] == "simulate"
    assert "seed" in manifest["config"]


def test_repeated_run_is_byte_identical(tmp_path):
    cfg = tmp_path / "sim.cfg"
    cfg.write_text("kind=bns\nhorizon=1\ndt=0.01\nseed=7\n")
    for out in ("a", "b"):
        assert run(["simulate", "--config", str(cfg), "--out", out], tmp_path).returncode == 0
    for name in ("price.csv", "variance.csv", "log_price.csv", "manifest.json"):
        a = (tmp_path / "a" / name).read_bytes()
        b = (tmp_path / "b" / name).read_bytes()
        assert a == b, name


def test_rerun_from_resolved_config(tmp_path):
    assert run(["simulate", "--set", "kind=bm", "--seed", "99", "--out", "a"],
               tmp_path).returncode == 0
    # the resolved key=value file reproduces the run exactly
    resolved = tmp_path / "a" / "resolved.cfg"
    text = "\n".join(line for line in resolved.read_text().splitlines()
                     if not line.startswith("out="))
    cfg = tmp_path / "replay.cfg"
    cfg.write_text(text + "\n")
    assert run(["simulate", "--config", str(cfg), "--out", "b"], tmp_path).returncode == 0
    assert (tmp_path / "a" / "path.csv").read_bytes() == (tmp_path / "b" / "path.csv").read_bytes()


def test_thresholds_symmetric_and_infeasible(tmp_path):
    res = run(["thresholds", "--set", "alpha00=0.05", "--set", "alpha01=0.05",
               "--set", "alpha10=0.05", "--set", "l1=-3.5", "--out", "t"], tmp_path)
    assert res.returncode == 0
    rect = json.loads((tmp_path / "t" / "rectangle.json").read_text())
    assert rect["rectangle"]["l1"] == pytest.approx(-rect["rectangle"]["r1"])
    assert rect["corrected"]["l2"] == pytest.approx(-rect["corrected"]["r2"])

    bad = run(["thresholds", "--set", "alpha00=0.2", "--set", "alpha01=0.05",
               "--set", "alpha10=0.05", "--out", "bad"], tmp_path)
    assert bad.returncode == 3


def test_thresholds_grid_is_monotone(tmp_path):
    res = run(["thresholds", "--set", "alpha_grid=0.1,0.05,0.01", "--set", "variant=corrected",
               "--out", "g"], tmp_path)
    assert res.returncode == 0
    rows = (tmp_path / "g" / "thresholds_grid.csv").read_text().splitlines()[1:]
    r1 = [float(r.split(",")[2]) for r in rows]
    assert r1 == sorted(r1)  # r grows as alpha shrinks


def test_montecarlo_report_and_usage_error(tmp_path):
    res = run(["montecarlo", "--set", "test=drift", "--set", "world=11",
               "--set", "n_paths=500", "--set", "l1=-1", "--set", "r1=1",
               "--set", "l2=-1", "--set", "r2=1", "--threads", "2", "--out", "mc"], tmp_path)
    assert res.returncode == 0
    stats = json.loads((tmp_path / "mc" / "stats.json").read_text())
    row = stats["rows"][0]
    assert 0.0 <= row["alpha_hat"] <= 1.0
    assert (tmp_path / "mc" / "stats.csv").exists()

    bad = run(["montecarlo", "--set", "n_paths=0", "--out", "x"], tmp_path)
    assert bad.returncode == 2


def test_envelopes_grid_and_sweep(tmp_path):
    res = run(["envelopes", "--set", "mode=direct", "--set", "beta1=0.9", "--set", "beta2=0.9",
               "--set", "gamma1=0.16", "--set", "gamma2=0.21", "--set", "C1=0.5",
               "--set", "C2=0.45", "--set", "L_sweep=1e-06,0.001,0.1", "--set", "grid_n=16",
               "--out", "env"], tmp_path)
    assert res.returncode == 0
    manifest = json.loads((tmp_path / "env" / "manifest.json").read_text())
    gaps = [row["gap_sup_norm"] for row in manifest["gap_sweep"]]
    assert gaps == sorted(gaps)
    first = manifest["outputs"][0]
    header = (tmp_path / "env" / first).read_text().splitlines()[0]
    assert header == "x,y,lower,upper"
    # corner value 1 appears in the grid for world 00
    grid = (tmp_path / "env" / "envelope_00_L1e-06.csv").read_text().splitlines()[1:]
    corner = [row for row in grid if row.startswith("-1,-1,")][0]
    assert corner.split(",")[2] == "1"


def test_oil_reports_and_missing_csv(tmp_path):
    res = run(["oil", "--set", "a=19.0", "--set", "l=-0.03", "--set", "alpha0=0.9",
               "--set", "confidence=1", "--set", "kform=pushforward",
               "--set", "nu_intensity=0.65445831", "--set", "nu_scale=0.46332453",
               "--out", "oil"], tmp_path)
    assert res.returncode == 0
    rep = json.loads((tmp_path / "oil" / "oil_report.json").read_text())
    assert rep["r"] == pytest.approx(0.3769, abs=5e-3)
    assert rep["exits"]["right"] + rep["exits"]["left"] + rep["exits"]["none"] == 30

    bad = run(["oil", "--set", "csv=/nonexistent/prices.csv", "--out", "x"], tmp_path)
    assert bad.returncode == 2
