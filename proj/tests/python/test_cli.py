"""End-to-end checks of the seqweight CLI binary (path in $SEQWEIGHT_CLI)."""

import math
import os
import subprocess

import pytest

CLI = os.environ.get("SEQWEIGHT_CLI")

pytestmark = pytest.mark.skipif(not CLI, reason="SEQWEIGHT_CLI not set")


def run(*args, **kwargs):
    return subprocess.run([CLI, *args], capture_output=True, text=True, **kwargs)


def test_no_args_prints_help():
    proc = run()
    assert proc.returncode == 0
    assert "calibrate" in proc.stdout
    assert "sweep" in proc.stdout


def test_calibrate_known_value():
    proc = run("calibrate", "--alpha", "0.05", "--m", "20", "--J", "200",
               "--weights", "ones")
    assert proc.returncode == 0
    printed = float(proc.stdout.split("=")[1])
    assert printed == pytest.approx(abs(math.log(0.05)) + math.log(3600), abs=5e-7)


def test_calibrate_interval_mode(tmp_path):
    proc = run("calibrate", "--alpha", "0.05", "--beta", "0.05", "--l", "0", "--u", "10",
               "--J", "10", "--out", str(tmp_path))
    assert proc.returncode == 0
    assert "c = inactive" in proc.stdout
    assert "d = inactive" in proc.stdout
    assert (tmp_path / "calibration.csv").exists()
    assert (tmp_path / "weights.csv").read_text().startswith("stream_index,weight\n")


def test_unknown_flag_is_config_error():
    assert run("calibrate", "--nonsense").returncode == 2


def test_validate_then_gap_run(tmp_path):
    out = str(tmp_path)
    proc = run("validate", "--out", out, "--trials", "40")
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert (tmp_path / "validation_stamp.txt").exists()

    proc = run("gap", "--J", "10", "--signal-fraction", "0.1", "--mu", "0.5",
               "--reps", "100", "--seed", "3", "--out", out, "--records",
               "--trace", os.path.join(out, "trace.csv"))
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert "no validation_stamp" not in proc.stderr
    summary = (tmp_path / "gap_summary.csv").read_text()
    assert summary.startswith("scenario,J,m,")
    assert (tmp_path / "gap_records.csv").read_text().count("\n") == 101
    manifest = (tmp_path / "gap_manifest.txt").read_text()
    assert "validation_stamp=present" in manifest
    trace = (tmp_path / "trace.csv").read_text()
    assert trace.startswith("n,stream,llr,wllr\n")
    assert len(trace.splitlines()) > 10


def test_unvalidated_run_warns(tmp_path):
    proc = run("gap", "--J", "10", "--mu", "0.5", "--reps", "50",
               "--out", str(tmp_path))
    assert proc.returncode == 0
    assert "validation_stamp" in proc.stderr


def test_sweep_config_roundtrip(tmp_path):
    config = tmp_path / "scenarios.cfg"
    config.write_text(
        "[tiny]\nJ=10\nmu=0.5\nreps=100\nseed=5\n"
        "[tiny_gi]\nJ=10\nmu=0.5\nprocedure=gi\nl=0\nu=10\nreps=100\nseed=6\n")
    out = tmp_path / "out"
    proc = run("sweep", "--config", str(config), "--out", str(out))
    assert proc.returncode == 0, proc.stdout + proc.stderr
    summary = (out / "sweep_summary.csv").read_text()
    assert summary.count("\n") == 3
    plot = (out / "sweep_plot.csv").read_text()
    assert plot.startswith("J,scenario,ess,ess_se\n")
    assert "tiny_gi" in plot
    manifest = (out / "sweep_manifest.txt").read_text()
    assert "seed_derivation=splitmix64-counter-v1" in manifest


def test_sweep_determinism_across_worker_counts(tmp_path):
    config = tmp_path / "scenarios.cfg"
    config.write_text("[tiny]\nJ=10\nmu=0.5\nreps=200\nseed=5\n")
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert run("sweep", "--config", str(config), "--out", str(out_a),
               "--workers", "1").returncode == 0
    assert run("sweep", "--config", str(config), "--out", str(out_b),
               "--workers", "4").returncode == 0
    assert (out_a / "sweep_summary.csv").read_bytes() == \
        (out_b / "sweep_summary.csv").read_bytes()


def test_config_error_exit_code(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("[x]\nJ=10\nJ=12\n")
    proc = run("sweep", "--config", str(bad), "--out", str(tmp_path))
    assert proc.returncode == 2
    assert "line 3" in proc.stderr
