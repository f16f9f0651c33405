"""End-to-end CLI runs: artifacts, determinism, and exit-status classes."""

import hashlib
import json
import subprocess
import sys

import pytest

from nvsensor.config import canonical_dump, parse_config

T1_CONFIG = 'experiment = "t1-sweep"\n\n[t1_sweep]\ndensity_grid = [0.0, 0.05, 0.1]\n'


def _cli(tmp_path, *argv):
    return subprocess.run([sys.executable, "-m", "nvsensor.cli", *argv],
                          cwd=tmp_path, capture_output=True, text=True)


def _sha(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write(tmp_path, text, name="run.toml"):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_t1_sweep_example_run(tmp_path):
    _write(tmp_path, T1_CONFIG)
    proc = _cli(tmp_path, "--config", "run.toml", "--out", "out")
    assert proc.returncode == 0, proc.stderr
    csv = tmp_path / "out" / "t1_sweep.csv"
    lines = csv.read_text().splitlines()
    assert lines[0] == "gd_density_nm2,gamma_bulk_s1,gamma_surface_s1," \
        "gamma_gd_s1,t1_seconds"
    assert len(lines) == 4
    t1s = [float(line.split(",")[-1]) for line in lines[1:]]
    assert t1s[0] > t1s[1] > t1s[2]
    # written paths are announced on stdout
    assert "t1_sweep.csv" in proc.stdout
    assert "run_manifest.json" in proc.stdout


def test_repeat_invocations_are_byte_identical(tmp_path):
    _write(tmp_path, T1_CONFIG)
    assert _cli(tmp_path, "--config", "run.toml", "--out", "a").returncode == 0
    assert _cli(tmp_path, "--config", "run.toml", "--out", "b").returncode == 0
    assert _sha(tmp_path / "a" / "t1_sweep.csv") == \
        _sha(tmp_path / "b" / "t1_sweep.csv")
    # manifests agree except for the recorded wall time
    manifests = []
    for sub in ("a", "b"):
        data = json.loads((tmp_path / sub / "run_manifest.json").read_text())
        data.pop("wall_time_s")
        manifests.append(data)
    assert manifests[0] == manifests[1]


def test_worker_count_leaves_bytes_unchanged(tmp_path):
    _write(tmp_path, 'experiment = "ensemble-hist"\n\n[ensemble]\n'
           "count = 600\n\n[ensemble_hist]\ngroup_size = 10\nnoisy = true\n")
    for sub, workers in (("w1", "1"), ("w8", "8")):
        proc = _cli(tmp_path, "--config", "run.toml", "--out", sub,
                    "--workers", workers)
        assert proc.returncode == 0, proc.stderr
    assert _sha(tmp_path / "w1" / "ensemble_hist.csv") == \
        _sha(tmp_path / "w8" / "ensemble_hist.csv")
    assert _sha(tmp_path / "w1" / "ensemble_hist_report.json") == \
        _sha(tmp_path / "w8" / "ensemble_hist_report.json")


def test_seed_flag_changes_sampled_output(tmp_path):
    _write(tmp_path, 'experiment = "sensitivity-dist"\n\n[ensemble]\n'
           "count = 50\n")
    assert _cli(tmp_path, "--config", "run.toml", "--out", "s0").returncode == 0
    assert _cli(tmp_path, "--config", "run.toml", "--out", "s1",
                "--seed", "1").returncode == 0
    assert _sha(tmp_path / "s0" / "sensitivity_dist.csv") != \
        _sha(tmp_path / "s1" / "sensitivity_dist.csv")


def test_manifest_records_run_and_hashes(tmp_path):
    _write(tmp_path, T1_CONFIG)
    assert _cli(tmp_path, "--config", "run.toml", "--out", "out",
                "--seed", "9").returncode == 0
    manifest = json.loads((tmp_path / "out" / "run_manifest.json").read_text())
    assert manifest["experiment"] == "t1-sweep"
    assert manifest["seed"] == 9
    assert manifest["kernel_backend"] in ("compiled", "python")
    assert manifest["format"] == "csv"
    digest = manifest["outputs"]["t1_sweep.csv"]
    assert digest == _sha(tmp_path / "out" / "t1_sweep.csv")
    # the config echo reproduces the run's exact parsed configuration
    echoed = parse_config(manifest["config"])
    assert echoed == parse_config(T1_CONFIG)
    assert canonical_dump(echoed) == manifest["config"]


def test_json_format_carries_same_rows(tmp_path):
    _write(tmp_path, T1_CONFIG)
    assert _cli(tmp_path, "--config", "run.toml", "--out", "c").returncode == 0
    assert _cli(tmp_path, "--config", "run.toml", "--out", "j",
                "--format", "json").returncode == 0
    rows = json.loads((tmp_path / "j" / "t1_sweep.json").read_text())
    csv_lines = (tmp_path / "c" / "t1_sweep.csv").read_text().splitlines()
    assert len(rows) == len(csv_lines) - 1
    for row, line in zip(rows, csv_lines[1:]):
        assert float(line.split(",")[0]) == row["gd_density_nm2"]
        assert float(line.split(",")[-1]) == row["t1_seconds"]


def test_positional_experiment_overrides_config(tmp_path):
    _write(tmp_path, T1_CONFIG)
    proc = _cli(tmp_path, "sensitivity-map", "--config", "run.toml",
                "--out", "out")
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "out" / "sensitivity_map.csv").exists()
    assert not (tmp_path / "out" / "t1_sweep.csv").exists()


def test_usage_errors_exit_2(tmp_path):
    _write(tmp_path, '[ensemble]\ncount = 0\n', "bad.toml")
    proc = _cli(tmp_path, "ensemble-hist", "--config", "bad.toml")
    assert proc.returncode == 2
    assert "count" in proc.stderr
    assert len(proc.stderr.strip().splitlines()) == 1

    _write(tmp_path, "[ensemble]\ncount = 10\nwhat = 1\n", "unk.toml")
    proc = _cli(tmp_path, "t1-sweep", "--config", "unk.toml")
    assert proc.returncode == 2
    assert "line 3" in proc.stderr and "what" in proc.stderr

    proc = _cli(tmp_path, "t1-sweep", "--config", "missing.toml")
    assert proc.returncode == 2

    _write(tmp_path, "", "empty.toml")
    proc = _cli(tmp_path, "--config", "empty.toml")
    assert proc.returncode == 2
    assert "experiment" in proc.stderr

    proc = _cli(tmp_path, "time-travel", "--config", "empty.toml")
    assert proc.returncode == 2


def test_runtime_errors_exit_3(tmp_path):
    # valid config, but the diameter distribution has no mass above the
    # physical floor: sampling aborts at run time
    _write(tmp_path, 'experiment = "sensitivity-dist"\n\n[ensemble]\n'
           "count = 10\nd_mean = 0.5\nd_sd = 1e-9\n")
    proc = _cli(tmp_path, "--config", "run.toml", "--out", "out")
    assert proc.returncode == 3
    assert "diameter" in proc.stderr
    # no partial artifacts are left behind
    assert not (tmp_path / "out" / "sensitivity_dist.csv").exists()


@pytest.mark.parametrize("experiment", ["t1-sweep", "sensitivity-map",
                                        "sensitivity-dist", "ensemble-hist",
                                        "fnr-curve"])
def test_all_experiments_run_clean(tmp_path, experiment):
    _write(tmp_path, "[ensemble]\ncount = 40\n\n"
           "[sensitivity_map]\ndiameter_grid = [20.0, 30.0]\n"
           "standoff_grid = [1.0, 2.0]\n\n"
           "[t1_sweep]\ndensity_grid = [0.0, 0.1]\n\n"
           "[fnr_curve]\nload_grid = [100, 1000]\ngroup_size = 4\n\n"
           "[ensemble_hist]\ngroup_size = 4\n")
    proc = _cli(tmp_path, experiment, "--config", "run.toml", "--out", "out")
    assert proc.returncode == 0, proc.stderr
    stem = experiment.replace("-", "_")
    assert (tmp_path / "out" / f"{stem}.csv").exists()
