"""Experiment runner: `shapeflow run <config.json>` / `shapeflow list`.

A config is a single JSON document naming an experiment, its parameters, and
an output directory.  Each run writes `results.csv` (and for some experiments
`trajectory.csv`) plus `manifest.json` recording the resolved config and every
tolerance/threshold that shaped the numbers.  Runs are deterministic: the same
config and seed produce byte-identical CSV files.
"""

import argparse
import concurrent.futures
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from . import curvature, diffgroup, geodesics, metric, sampling, zigzag
from .curves import FieldAlongCurve, circle, curve_frame
from .errors import ShapeflowError
from .expressions import compile_expression
from .spectral import grid, periodic_integral


class ConfigError(ShapeflowError):
    pass


@dataclass
class ExperimentConfig:
    experiment: str
    parameters: dict
    output_dir: Path
    seed: int | None = None
    threads: int = 1


def load_config(path: Path, output_dir=None, seed=None, threads=None) -> ExperimentConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(raw, dict) or "experiment" not in raw:
        raise ConfigError("config must be a JSON object with an 'experiment' field")
    name = raw["experiment"]
    if name not in EXPERIMENTS:
        raise ConfigError(
            f"unknown experiment {name!r}; known: {', '.join(sorted(EXPERIMENTS))}"
        )
    params = raw.get("parameters", {})
    if not isinstance(params, dict):
        raise ConfigError("'parameters' must be a JSON object")
    defaults = EXPERIMENTS[name].defaults
    unknown = set(params) - set(defaults)
    if unknown:
        raise ConfigError(f"unknown parameter(s) for {name}: {', '.join(sorted(unknown))}")
    merged = {**defaults, **params}
    out = Path(output_dir or raw.get("output_dir", "."))
    cfg_seed = seed if seed is not None else raw.get("seed")
    if EXPERIMENTS[name].needs_seed and cfg_seed is None:
        raise ConfigError(f"experiment {name} draws random data and needs a seed")
    return ExperimentConfig(name, merged, out, cfg_seed, threads or int(raw.get("threads", 1)))


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.16e}"


def _write_atomic(path: Path, text: str):
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: Path, columns, rows):
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(row[c]) for c in columns))
    _write_atomic(path, "\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# experiment implementations; each returns
#   (columns, rows, trajectory (columns, rows) or None, tolerances, failures)


# ratio threshold for L_hor(32)/L_hor(1) on the translated-circle benchmark,
# frozen from the pre-build pilot (measured 0.4259 at morse_frequency = 8);
# the originally targeted 0.25 is out of reach for the single zig-zag
# construction at n <= 32, see the decay analysis in the README
PILOT_DECAY_THRESHOLD = 0.45
PILOT_DECAY_TARGET = 0.25


def _run_vanish_curves(params, rng, threads):
    f0 = circle(params["radius"], K=64)
    dx, dy = params["translation"]
    f1 = circle(params["radius"], K=64, center=(dx, dy))
    n_list = [int(n) for n in params["n_list"]]

    def one(n):
        try:
            return zigzag.vanishing_sweep(
                f0, f1, [n],
                resolution_factor=int(params["resolution_factor"]),
                k_min=int(params["k_min"]), t_min=int(params["t_min"]),
                A=float(params["A"]),
                morse_frequency=int(params["morse_frequency"]),
            )[0]
        except ShapeflowError as exc:
            return {"n": int(n), "error": str(exc)}

    if threads > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, n_list))
    else:
        results = [one(n) for n in n_list]
    failures = [r for r in results if "error" in r]
    rows = sorted((r for r in results if "error" not in r), key=lambda r: r["n"])
    tol = {
        "resolution_factor": params["resolution_factor"],
        "morse_frequency": params["morse_frequency"],
        "decay_threshold_pilot": PILOT_DECAY_THRESHOLD,
        "decay_target_original": PILOT_DECAY_TARGET,
        "horizontal_residual_tol": zigzag.HORIZONTAL_RESIDUAL_TOL,
    }
    if len(rows) > 1:
        tol["measured_decay_ratio"] = rows[-1]["L_hor"] / rows[0]["L_hor"]
        tol["decay_target_met"] = bool(tol["measured_decay_ratio"] < PILOT_DECAY_TARGET)
    return ["n", "K", "T", "L_hor", "vol_max"], rows, None, tol, failures


def _run_vanish_diff(params, rng, threads):
    g = sampling.smooth_bump(params["bump_center"], params["bump_halfwidth"],
                             params["bump_height"])
    support = (params["bump_center"] - params["bump_halfwidth"],
               params["bump_center"] + params["bump_halfwidth"])
    rows, failures = [], []
    for eps in params["epsilon_list"]:
        eps = float(eps)
        try:
            lam = 1.0 - eps
            basic = diffgroup.basic_wave(lam, eps)
            basic_report = diffgroup.wave_energy(basic, basic.t_grid[0], basic.t_grid[-1])
            path = diffgroup.short_path_to(g, support, eps)
            path_report = diffgroup.wave_energy(path, path.t_grid[0], path.t_grid[-1])
            target = path.x_grid + path.displacement
            endpoint_error = float(np.abs(path.phi[-1] - target).max())
            # witnesses must be supported inside the narrowest wave window
            rho = sampling.smooth_bump(params["bump_center"],
                                       params["bump_halfwidth"] + 0.8)
            f_test = sampling.smooth_bump(params["bump_center"] + params["bump_halfwidth"] / 3.0,
                                          params["bump_halfwidth"] + 0.5)
            lower = diffgroup.path_lower_bound(path, rho, f_test, A=float(params["A"]))
            rows.append({
                "epsilon": eps,
                "dx": path.dx,
                "basic_energy": basic_report.energy,
                "basic_bound": basic_report.bound,
                "basic_satisfied": basic_report.satisfied,
                "path_energy": path_report.energy,
                "endpoint_sup_error": endpoint_error,
                "lb_lhs": lower.lhs,
                "lb_rhs": lower.rhs,
                "lb_satisfied": lower.satisfied,
                "h0_energy": lower.details["h0_energy"],
                "ga_length": lower.details["ga_length"],
            })
        except ShapeflowError as exc:
            failures.append({"epsilon": eps, "error": str(exc)})
    columns = ["epsilon", "dx", "basic_energy", "basic_bound", "basic_satisfied",
               "path_energy", "endpoint_sup_error", "lb_lhs", "lb_rhs", "lb_satisfied",
               "h0_energy", "ga_length"]
    tol = {"bound_slack": 1e-6, "dx_rule": "epsilon/8", "lambda_rule": "1-epsilon"}
    return columns, rows, None, tol, failures


def _run_geodesic_shape(params, rng, threads):
    K = int(params["K"])
    f0 = circle(params["radius"], K=K)
    n_out = geodesics.leftward_normal(f0) * -1.0  # outward on a ccw circle
    v0 = FieldAlongCurve(float(params["speed"]) * n_out)
    traj = geodesics.integrate_geodesic(
        geodesics.GeodesicState(f0, v0, 0.0),
        T_end=float(params["t_end"]), steps=int(params["steps"]),
        mode=params["mode"],
    )
    r0, rdot0 = float(params["radius"]), float(params["speed"])
    e0 = traj.energies[0]
    rows = []
    for state, energy in zip(traj.states, traj.energies):
        radius = float(np.linalg.norm(state.f.points, axis=1).mean())
        closed = (r0**1.5 + 1.5 * np.sqrt(r0) * rdot0 * state.t) ** (2.0 / 3.0)
        frame = curve_frame(state.f)
        tang = np.einsum("ij,ij->i", state.v.vectors, frame.derivative) / frame.speed
        vmax = max(np.linalg.norm(state.v.vectors, axis=1).max(), 1e-300)
        rows.append({
            "t": state.t,
            "kinetic_energy": energy,
            "energy_drift": abs(energy - e0) / max(abs(e0), 1e-300),
            "radius_mean": radius,
            "radius_closed_form": closed,
            "radius_error": abs(radius - closed),
            "tangential_residual": float(np.abs(tang).max()) / vmax,
        })
    columns = ["t", "kinetic_energy", "energy_drift", "radius_mean",
               "radius_closed_form", "radius_error", "tangential_residual"]
    tol = {"energy_drift_tol": 1e-6, "radius_tol": 1e-5, "tangential_residual_tol": 1e-5}
    failures = [{"error": traj.reason}] if traj.stopped_early else []
    return columns, rows, None, tol, failures


def _run_geodesic_diff(params, rng, threads):
    K = int(params["K"])
    xs = grid(K)
    u0_fn = compile_expression(params["u0"], variables=("x",))
    u0 = diffgroup.PeriodicField((np.asarray(u0_fn(xs), dtype=float) + np.zeros(K),))
    traj = diffgroup.integrate_diff_geodesic(
        u0, params["equation"], float(params["t_end"]), int(params["steps"]),
        A=float(params["A"]),
    )
    mass0 = traj.invariants["mass"][0]
    energy0 = traj.invariants["energy"][0]
    rows = []
    for i, t in enumerate(traj.times):
        rows.append({
            "t": t,
            "mass": traj.invariants["mass"][i],
            "energy": traj.invariants["energy"][i],
            "mass_drift": abs(traj.invariants["mass"][i] - mass0) / max(abs(mass0), 1e-300),
            "energy_drift": abs(traj.invariants["energy"][i] - energy0) / max(abs(energy0), 1e-300),
            "max_gradient": traj.invariants["max_gradient"][i],
        })
    columns = ["t", "mass", "energy", "mass_drift", "energy_drift", "max_gradient"]
    tol = {"drift_tol": 1e-8, "gradient_blowup": diffgroup.GRADIENT_BLOWUP}
    failures = [{"error": traj.reason}] if traj.stopped_early else []
    return columns, rows, None, tol, failures


def _run_curvature_shape(params, rng, threads):
    K, d = int(params["K"]), int(params["d"])
    rows = []
    for trial in range(int(params["trials"])):
        f = sampling.random_curve(rng, K, d=d)
        x = sampling.random_normal_field(rng, f)
        y = sampling.random_normal_field(rng, f)
        br = curvature.curvature_terms(f, x, y)
        rows.append({
            "trial": trial,
            "term1": br.term1, "term2": br.term2, "term3": br.term3,
            "term4": br.term4, "term5": br.term5, "term6": br.term6,
            "term7": br.term7, "total": br.total, "sectional": br.sectional,
        })
    columns = ["trial", "term1", "term2", "term3", "term4", "term5", "term6",
               "term7", "total", "sectional"]
    tol = {"codim1_curvature_floor": -1e-10, "normality_tol": curvature.NORMALITY_TOL}
    return columns, rows, None, tol, []


def _run_curvature_diff(params, rng, threads):
    K = int(params["K"])
    rows = []
    for trial in range(int(params["trials"])):
        x = sampling.random_periodic_field_1d(rng, K, modes=int(params["modes"]))
        y = sampling.random_periodic_field_1d(rng, K, modes=int(params["modes"]))
        general = diffgroup.diff_curvature(x, y)
        br = diffgroup.bracket(x, y).components[0]
        closed = -periodic_integral(br**2)
        rows.append({
            "trial": trial,
            "general_formula": general,
            "bracket_formula": closed,
            "abs_diff": abs(general - closed),
        })
    columns = ["trial", "general_formula", "bracket_formula", "abs_diff"]
    tol = {"identity_tol": 1e-8}
    return columns, rows, None, tol, []


def _run_bounds(params, rng, threads):
    A = float(params["A"])
    rows = []
    for trial in range(int(params["trials"])):
        path = sampling.random_path(rng, int(params["K"]), n_times=int(params["n_times"]))
        rep = metric.lipschitz_gap(path, A=A)
        rows.append({"kind": 0, "trial": trial, "lhs": rep.lhs, "rhs": rep.rhs,
                     "gap": rep.gap, "satisfied": rep.satisfied})
        rep = metric.swept_volume(path)
        rows.append({"kind": 1, "trial": trial, "lhs": rep.lhs, "rhs": rep.rhs,
                     "gap": rep.gap, "satisfied": rep.satisfied})
    columns = ["kind", "trial", "lhs", "rhs", "gap", "satisfied"]
    tol = {"report_tolerance": "1e-8 * max(1, |rhs|)", "kind_codes": "0=lipschitz, 1=swept"}
    return columns, rows, None, tol, []


def _run_wave_demo(params, rng, threads):
    eps = float(params["epsilon"])
    g = sampling.smooth_bump(params["bump_center"], params["bump_halfwidth"],
                             params["bump_height"])
    support = (params["bump_center"] - params["bump_halfwidth"],
               params["bump_center"] + params["bump_halfwidth"])
    path = diffgroup.short_path_to(g, support, eps)
    n_particles = int(params["particles"])
    idx = np.linspace(0, path.x_grid.size - 1, n_particles).round().astype(int)
    traj_rows = []
    stride = max(1, path.t_grid.size // int(params["time_samples"]))
    for p, j in enumerate(idx):
        for i in range(0, path.t_grid.size, stride):
            traj_rows.append({
                "particle": p,
                "x0": path.x_grid[j],
                "t": path.t_grid[i],
                "position": path.phi[i, j],
            })
    rows = []
    for p, j in enumerate(idx):
        target = path.x_grid[j] + path.displacement[j]
        rows.append({
            "particle": p,
            "x0": path.x_grid[j],
            "final_position": path.phi[-1, j],
            "target": target,
            "abs_error": abs(path.phi[-1, j] - target),
        })
    columns = ["particle", "x0", "final_position", "target", "abs_error"]
    traj = (["particle", "x0", "t", "position"], traj_rows)
    tol = {"dx_rule": "epsilon/8", "lambda": 1.0 - eps}
    return columns, rows, traj, tol, []


@dataclass(frozen=True)
class Experiment:
    runner: callable
    defaults: dict
    needs_seed: bool = False


EXPERIMENTS = {
    "vanish-curves": Experiment(_run_vanish_curves, {
        "n_list": [1, 2, 4, 8, 16, 32], "translation": [0.5, 0.0], "radius": 1.0,
        "resolution_factor": 32, "k_min": 64, "t_min": 64, "A": 0.0,
        "morse_frequency": 8,
    }),
    "vanish-diff": Experiment(_run_vanish_diff, {
        "epsilon_list": [0.2, 0.1, 0.05], "bump_height": 0.5, "bump_halfwidth": 1.5,
        "bump_center": 0.0, "A": 1.0,
    }),
    "geodesic-shape": Experiment(_run_geodesic_shape, {
        "radius": 1.0, "speed": -0.5, "K": 64, "steps": 512, "t_end": 0.5, "mode": "full",
    }),
    "geodesic-diff": Experiment(_run_geodesic_diff, {
        "equation": "burgers", "u0": "0.1*sin(x)", "A": 1.0, "K": 128,
        "steps": 256, "t_end": 0.5,
    }),
    "curvature-shape": Experiment(_run_curvature_shape, {
        "trials": 100, "K": 64, "d": 2,
    }, needs_seed=True),
    "curvature-diff": Experiment(_run_curvature_diff, {
        "trials": 50, "K": 64, "modes": 5,
    }, needs_seed=True),
    "bounds": Experiment(_run_bounds, {
        "trials": 25, "K": 64, "n_times": 17, "A": 1.0,
    }, needs_seed=True),
    "wave-demo": Experiment(_run_wave_demo, {
        "epsilon": 0.05, "bump_height": 0.5, "bump_halfwidth": 1.5, "bump_center": 0.0,
        "particles": 40, "time_samples": 200,
    }),
}


def run(config: ExperimentConfig) -> int:
    exp = EXPERIMENTS[config.experiment]
    rng = np.random.default_rng(config.seed)
    config.output_dir.mkdir(parents=True, exist_ok=True)
    columns, rows, traj, tolerances, failures = exp.runner(
        config.parameters, rng, int(config.threads)
    )
    write_csv(config.output_dir / "results.csv", columns, rows)
    outputs = {"results": "results.csv", "manifest": "manifest.json"}
    if traj is not None:
        traj_columns, traj_rows = traj
        write_csv(config.output_dir / "trajectory.csv", traj_columns, traj_rows)
        outputs["trajectory"] = "trajectory.csv"
    manifest = {
        "tool": "shapeflow",
        "version": __version__,
        "experiment": config.experiment,
        "config": {"parameters": _jsonable(config.parameters),
                   "seed": config.seed, "threads": config.threads},
        "columns": columns,
        "rows": len(rows),
        "outputs": outputs,
        "tolerances": _jsonable(tolerances),
        "partial": bool(failures),
        "failures": _jsonable(failures),
    }
    _write_atomic(config.output_dir / "manifest.json",
                  json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return 0


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="shapeflow",
                                     description="run reproducible desk-scale experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("list", help="print available experiments")
    runner = sub.add_parser("run", help="run an experiment from a JSON config")
    runner.add_argument("config", type=Path)
    runner.add_argument("--output-dir", type=Path, default=None)
    runner.add_argument("--threads", type=int, default=None)
    runner.add_argument("--seed", type=int, default=None)
    args = parser.parse_args(argv)

    if args.command == "list":
        for name in sorted(EXPERIMENTS):
            defaults = json.dumps(_jsonable(EXPERIMENTS[name].defaults), sort_keys=True)
            print(f"{name}: defaults {defaults}")
        return 0

    try:
        config = load_config(args.config, args.output_dir, args.seed, args.threads)
        return run(config)
    except ShapeflowError as exc:
        print(json.dumps({"error": {"type": type(exc).__name__, "message": str(exc)}}))
        return 2


if __name__ == "__main__":
    sys.exit(main())
