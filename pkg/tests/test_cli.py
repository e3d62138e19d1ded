import json
import subprocess
import sys

import numpy as np
import pytest

from shapeflow.errors import ParameterError
from shapeflow.expressions import compile_expression


class TestExpressions:
    def test_basic_arithmetic(self):
        f = compile_expression("0.1*sin(x) + 2", variables=("x",))
        xs = np.linspace(0, 1, 5)
        assert np.allclose(f(xs), 0.1 * np.sin(xs) + 2)

    def test_constants_and_powers(self):
        f = compile_expression("cos(2*pi*x)**2", variables=("x",))
        assert f(0.5) == pytest.approx(1.0)

    def test_multiple_variables(self):
        f = compile_expression("x*cos(theta)", variables=("x", "theta"))
        assert f(2.0, 0.0) == pytest.approx(2.0)

    def test_unknown_name_rejected(self):
        with pytest.raises(ParameterError):
            compile_expression("y + 1", variables=("x",))

    def test_calls_restricted(self):
        with pytest.raises(ParameterError):
            compile_expression("__import__('os')", variables=("x",))
        with pytest.raises(ParameterError):
            compile_expression("open('x')", variables=("x",))

    def test_attribute_access_rejected(self):
        with pytest.raises(ParameterError):
            compile_expression("x.real", variables=("x",))


def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "shapeflow", *args],
                          capture_output=True, text=True)


def write_config(tmp_path, name, experiment, parameters, seed=None):
    cfg = {"experiment": experiment, "parameters": parameters,
           "output_dir": str(tmp_path / "out")}
    if seed is not None:
        cfg["seed"] = seed
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return path


class TestCli:
    def test_list_experiments(self):
        proc = run_cli("list")
        assert proc.returncode == 0
        for name in ("vanish-curves", "wave-demo", "bounds"):
            assert name in proc.stdout

    def test_invalid_config_gives_error_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"experiment": "no-such-thing"}))
        proc = run_cli("run", str(path))
        assert proc.returncode == 2
        err = json.loads(proc.stdout)
        assert "error" in err and "no-such-thing" in err["error"]["message"]

    def test_unknown_parameter_rejected(self, tmp_path):
        path = write_config(tmp_path, "c.json", "bounds", {"bogus": 1}, seed=0)
        proc = run_cli("run", str(path))
        assert proc.returncode == 2
        assert "bogus" in json.loads(proc.stdout)["error"]["message"]

    def test_missing_seed_rejected(self, tmp_path):
        path = write_config(tmp_path, "c.json", "curvature-shape", {"trials": 2})
        proc = run_cli("run", str(path))
        assert proc.returncode == 2
        assert "seed" in json.loads(proc.stdout)["error"]["message"]

    def test_geodesic_diff_drift_column(self, tmp_path):
        path = write_config(tmp_path, "c.json", "geodesic-diff",
                            {"K": 64, "steps": 128, "t_end": 0.25})
        proc = run_cli("run", str(path))
        assert proc.returncode == 0, proc.stderr
        rows = (tmp_path / "out" / "results.csv").read_text().strip().split("\n")
        header = rows[0].split(",")
        drift_col = header.index("energy_drift")
        drifts = [float(r.split(",")[drift_col]) for r in rows[1:]]
        assert max(drifts) < 1e-8

    def test_determinism_byte_identical(self, tmp_path):
        outputs = []
        for run_dir in ("a", "b"):
            cfg = {"experiment": "curvature-shape",
                   "parameters": {"trials": 5, "K": 64, "d": 2},
                   "output_dir": str(tmp_path / run_dir), "seed": 123}
            path = tmp_path / f"{run_dir}.json"
            path.write_text(json.dumps(cfg))
            proc = run_cli("run", str(path))
            assert proc.returncode == 0, proc.stderr
            outputs.append((tmp_path / run_dir / "results.csv").read_bytes())
        assert outputs[0] == outputs[1]

    def test_wave_demo_outputs(self, tmp_path):
        path = write_config(tmp_path, "c.json", "wave-demo",
                            {"epsilon": 0.1, "particles": 7, "time_samples": 40})
        proc = run_cli("run", str(path))
        assert proc.returncode == 0, proc.stderr
        out = tmp_path / "out"
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["outputs"]["trajectory"] == "trajectory.csv"
        assert not manifest["partial"]
        traj = (out / "trajectory.csv").read_text().strip().split("\n")
        assert traj[0] == "particle,x0,t,position"
        particles = {r.split(",")[0] for r in traj[1:]}
        assert len(particles) == 7
        results = (out / "results.csv").read_text().strip().split("\n")
        assert len(results) == 8  # header + one row per particle

    def test_thread_count_does_not_change_output(self, tmp_path):
        outputs = []
        for threads, name in ((1, "t1"), (3, "t3")):
            cfg = {"experiment": "vanish-curves",
                   "parameters": {"n_list": [1, 2], "morse_frequency": 2},
                   "output_dir": str(tmp_path / name), "threads": threads}
            path = tmp_path / f"{name}.json"
            path.write_text(json.dumps(cfg))
            proc = run_cli("run", str(path))
            assert proc.returncode == 0, proc.stderr
            outputs.append((tmp_path / name / "results.csv").read_bytes())
        assert outputs[0] == outputs[1]

    def test_manifest_records_tolerances(self, tmp_path):
        path = write_config(tmp_path, "c.json", "bounds",
                            {"trials": 2, "K": 64, "n_times": 17}, seed=7)
        proc = run_cli("run", str(path))
        assert proc.returncode == 0, proc.stderr
        manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
        assert "tolerances" in manifest and manifest["rows"] == 4
        assert manifest["config"]["seed"] == 7
