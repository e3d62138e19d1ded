"""Zig-zag time reparametrizations and the vanishing-length sweep.

Given a horizontal base path of curves, replace the common time by a
node-dependent zig-zag schedule: node x moves along its own trajectory
according to phi(t, alpha(x)), where alpha is a Morse function on the circle
and phi zig-zags n times between 0 and 1 before settling.  The horizontal
length of the resulting path decays as n grows while its endpoints stay
fixed: this is the mechanism behind vanishing geodesic distance on the
quotient space of curves.

The schedule is affine in the triangle wave w(alpha),

    phi(t, alpha) = A(t) + B(t) * w(alpha),
    A(t) = max(0, 2t - 1),   B(t) = 1 - |2t - 1|,

so mollification against a product kernel factors exactly into separate 1-D
mollifications of A, B and w.  With a Gaussian kernel these have closed
forms: smoothed ramps through the normal cdf in t, and a spectrally damped
Fourier series for the triangle in alpha.  The smoothed schedule is C-infty,
monotone in t, and still satisfies phi(0,.) = 0 and phi(1,.) = 1 to double
precision (the kernel is symmetric and the schedule extends oddly around
both time endpoints).
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import ndtr

from . import spectral
from .curves import DiscreteCurve, resample_curve
from .errors import DegenerateImmersionError, NonHorizontalPathError, ParameterError
from .metric import ImmersionPath, horizontality_residual, linear_interpolation_path, \
    make_horizontal, path_length_energy, path_volumes

HORIZONTAL_RESIDUAL_TOL = 1e-6


def cosine_morse(theta):
    """alpha(theta) = (1 - cos theta)/2: surjective onto [0,1], critical values {0,1}."""
    return 0.5 * (1.0 - np.cos(theta))


def oscillating_morse(frequency: int) -> Callable:
    """Morse function (1 - cos(m theta))/2 with 2m critical points, values {0,1}.

    Steeper level sets speed up the decay of the zig-zag length; the
    admissibility requirements (surjective onto [0,1], nondegenerate critical
    points, critical values on the half-integer lattice) hold for every m.
    """
    if frequency < 1:
        raise ParameterError(f"Morse frequency must be >= 1, got {frequency}")

    def alpha(theta):
        return 0.5 * (1.0 - np.cos(frequency * np.asarray(theta)))

    return alpha


@dataclass(frozen=True)
class ZigzagConfig:
    """Zig-zag count n, mollification width, and the Morse function on S^1."""

    n: int
    smoothing: float | None = None
    morse_alpha: Callable = field(default=cosine_morse)

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError(f"zig-zag count must be >= 1, got {self.n}")
        if self.smoothing is None:
            object.__setattr__(self, "smoothing", 1.0 / (16.0 * self.n))
        if self.smoothing < 0 or self.smoothing >= 1.0 / (8.0 * self.n):
            raise ParameterError(
                f"smoothing must lie in [0, 1/(8n)) = [0, {1.0 / (8 * self.n):.4g})"
            )


# --- the raw schedule and its exact separable mollification ----------------

# the Gaussian mollifier's standard deviation is smoothing / WIDTH_SIGMAS,
# so all but 0.3% of its mass lies within the nominal smoothing width
WIDTH_SIGMAS = 3.0


def _triangle(alpha, n):
    """Frequency-n triangle wave in [0,1]; even around 0 and 1-periodic pattern."""
    z = 2.0 * n * np.asarray(alpha, dtype=float)
    m = np.floor(z)
    frac = z - m
    return np.where(m.astype(np.int64) % 2 == 0, frac, 1.0 - frac)


def _triangle_dalpha(alpha, n):
    z = 2.0 * n * np.asarray(alpha, dtype=float)
    m = np.floor(z)
    return np.where(m.astype(np.int64) % 2 == 0, 2.0 * n, -2.0 * n)


def _gauss_pdf(u):
    return np.exp(-0.5 * u * u) / np.sqrt(2.0 * np.pi)


def _smoothed_relu(x, s):
    return x * ndtr(x / s) + s * _gauss_pdf(x / s)


def _schedule_parts(t, cfg: ZigzagConfig):
    """A, B, A', B' of the schedule phi = A(t) + B(t) w(alpha).

    Unsmoothed: A = max(0, 2t-1), B = 1 - |2t-1|.  These closed forms also
    realize the odd extension phi(-t) = -phi(t), phi(1+s) = 2 - phi(1-s), so
    Gaussian smoothing keeps A, B (and hence phi) exact at t = 0 and t = 1.
    """
    t = np.asarray(t, dtype=float)
    if cfg.smoothing == 0.0:
        a = np.maximum(0.0, 2.0 * t - 1.0)
        b = 1.0 - np.abs(2.0 * t - 1.0)
        da = np.where(t > 0.5, 2.0, 0.0)
        db = np.where(t <= 0.5, 2.0, -2.0)
        return a, b, da, db
    s = cfg.smoothing / WIDTH_SIGMAS
    relu = _smoothed_relu(t - 0.5, s)
    cdf = ndtr((t - 0.5) / s)
    a = 2.0 * relu
    b = 2.0 * t - 4.0 * relu
    da = 2.0 * cdf
    db = 2.0 - 4.0 * cdf
    return a, b, da, db


def _triangle_modes(cfg: ZigzagConfig):
    """Odd Fourier modes of the frequency-n triangle, damped by the kernel."""
    s = cfg.smoothing / WIDTH_SIGMAS
    js, factors = [], []
    j = 1
    while j <= 501:
        damp = np.exp(-0.5 * (2.0 * np.pi * cfg.n * j * s) ** 2)
        if damp / j**2 < 1e-16:
            break
        js.append(j)
        factors.append(damp)
        j += 2
    return np.array(js), np.array(factors)


def _smooth_triangle(alpha, cfg: ZigzagConfig):
    if cfg.smoothing == 0.0:
        return _triangle(alpha, cfg.n)
    alpha = np.asarray(alpha, dtype=float)
    js, damps = _triangle_modes(cfg)
    phases = 2.0 * np.pi * cfg.n * np.multiply.outer(alpha, js)
    vals = 0.5 - (4.0 / np.pi**2) * np.cos(phases) @ (damps / js**2)
    return np.clip(vals, 0.0, 1.0)


def _smooth_triangle_dalpha(alpha, cfg: ZigzagConfig):
    if cfg.smoothing == 0.0:
        return _triangle_dalpha(alpha, cfg.n)
    alpha = np.asarray(alpha, dtype=float)
    js, damps = _triangle_modes(cfg)
    phases = 2.0 * np.pi * cfg.n * np.multiply.outer(alpha, js)
    return (8.0 * cfg.n / np.pi) * np.sin(phases) @ (damps / js)


def _check_range(t, alpha):
    t = np.asarray(t, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    if (t < -1e-12).any() or (t > 1.0 + 1e-12).any():
        raise ParameterError("zig-zag time must lie in [0, 1]")
    if (alpha < -1e-12).any() or (alpha > 1.0 + 1e-12).any():
        raise ParameterError("zig-zag level must lie in [0, 1]")
    return np.clip(t, 0.0, 1.0), np.clip(alpha, 0.0, 1.0)


def zigzag_phi(t, alpha, cfg: ZigzagConfig):
    """Zig-zag schedule phi(t, alpha) in [0, 1].

    The unsmoothed schedule rises to the triangle wave's value by t = 1/2 and
    relaxes to 1 at t = 1; with cfg.smoothing > 0 it is mollified in (t,
    alpha), which keeps phi(0, .) = 0, phi(1, .) = 1 (the extension is odd
    around both time endpoints) and monotonicity in t.
    """
    t, alpha = _check_range(t, alpha)
    a, b, _, _ = _schedule_parts(t, cfg)
    out = a + b * _smooth_triangle(alpha, cfg)
    return float(out) if out.ndim == 0 else out


def zigzag_phi_dt(t, alpha, cfg: ZigzagConfig):
    """Time derivative of the (mollified) zig-zag schedule."""
    t, alpha = _check_range(t, alpha)
    _, _, da, db = _schedule_parts(t, cfg)
    out = da + db * _smooth_triangle(alpha, cfg)
    return float(out) if out.ndim == 0 else out


def zigzag_phi_dalpha(t, alpha, cfg: ZigzagConfig):
    """Level derivative of the (mollified) zig-zag schedule."""
    t, alpha = _check_range(t, alpha)
    _, b, _, _ = _schedule_parts(t, cfg)
    out = b * _smooth_triangle_dalpha(alpha, cfg)
    return float(out) if out.ndim == 0 else out


# --- building the reparametrized path ---------------------------------------


def _spline_eval_per_node(times, values, query, block=512):
    """Evaluate a cubic spline of (T+1, K, d) data at per-node times (T_out, K)."""
    n_out = query.shape[0]
    out = np.empty((n_out,) + values.shape[1:], dtype=float)
    for lo in range(0, values.shape[1], block):
        hi = min(lo + block, values.shape[1])
        cs = CubicSpline(times, values[:, lo:hi], axis=0)
        idx = np.clip(np.searchsorted(times, query[:, lo:hi]) - 1, 0, len(times) - 2)
        dt = query[:, lo:hi] - times[idx]
        cols = np.arange(hi - lo)[None, :]
        acc = cs.c[0, idx, cols]
        for k in range(1, 4):
            acc = acc * dt[..., None] + cs.c[k, idx, cols]
        out[:, lo:hi] = acc
    return out


def zigzag_path(base: ImmersionPath, cfg: ZigzagConfig) -> ImmersionPath:
    """Replace the time of a horizontal base path by the zig-zag schedule.

    Node j of the output at time t sits at base(phi(t, alpha(theta_j)),
    theta_j), with the exact velocities phi_t * base_velocity carried along.
    Endpoint curves are exactly those of the base path.
    """
    res = horizontality_residual(base)
    if res > HORIZONTAL_RESIDUAL_TOL:
        raise NonHorizontalPathError(
            f"zig-zag needs a horizontal base path (residual {res:.2e} > "
            f"{HORIZONTAL_RESIDUAL_TOL:.0e}); run make_horizontal first"
        )
    times = base.times
    span = times[-1] - times[0]
    unit_times = (times - times[0]) / span
    alpha = np.clip(cfg.morse_alpha(spectral.grid(base.K)), 0.0, 1.0)

    a, b, da, db = _schedule_parts(unit_times, cfg)
    w = _smooth_triangle(alpha, cfg)
    phi = a[:, None] + b[:, None] * w[None, :]
    dphi = (da[:, None] + db[:, None] * w[None, :]) / span

    eval_times = times[0] + np.clip(phi, 0.0, 1.0) * span
    new_pts = _spline_eval_per_node(times, base.stack, eval_times)
    new_vel = _spline_eval_per_node(times, base.velocity_samples(), eval_times)
    new_vel *= dphi[..., None] * span

    # phi(0,.) = 0 and phi(1,.) = 1 exactly: pin the endpoint curves bit-for-bit
    new_pts[0] = base.stack[0]
    new_pts[-1] = base.stack[-1]
    return ImmersionPath(times, tuple(DiscreteCurve(p) for p in new_pts), new_vel)


def _horizontal_base(f0: DiscreteCurve, f1: DiscreteCurve, K: int, T: int,
                     flow_resolution: int = 256) -> ImmersionPath:
    """Straight-line path made horizontal, sampled on a (T+1) x K grid.

    The reparametrizing flow is resolved at `flow_resolution` nodes (the base
    path is low-frequency); the result is trigonometrically resampled to the
    zig-zag grid K, which may be much finer.
    """
    k_flow = min(K, max(flow_resolution, 64))
    g0 = resample_curve(f0, k_flow) if f0.K != k_flow else f0
    g1 = resample_curve(f1, k_flow) if f1.K != k_flow else f1
    try:
        straight = linear_interpolation_path(g0, g1, T + 1)
    except DegenerateImmersionError as exc:
        raise DegenerateImmersionError(
            "straight-line interpolation leaves the immersion space; "
            "supply a different base path"
        ) from exc
    base = make_horizontal(straight)
    if k_flow == K:
        return base
    pts = spectral.resample_periodic(base.stack, K, axis=1)
    vel = spectral.resample_periodic(base.velocity_samples(), K, axis=1)
    return ImmersionPath(base.times, tuple(DiscreteCurve(p) for p in pts), vel)


def vanishing_sweep(f0: DiscreteCurve, f1: DiscreteCurve, n_list,
                    resolution_factor: int = 32, k_min: int = 64, t_min: int = 64,
                    A: float = 0.0, morse_frequency: int = 1):
    """Horizontal length of the zig-zag path for each n in n_list.

    The base path is the straight-line interpolation from f0 to f1, made
    horizontal.  The level sets of the Morse function (1 - cos(m theta))/2
    oscillate with `morse_frequency` m, so the spatial zig-zag frequency is
    n*m and the grid scales as K >= resolution_factor * n * m (time structure
    scales with n alone).  Returns one row per n: dict with n, K, T, L_hor
    and the maximal slice volume along the zig-zag path.
    """
    alpha_fn = oscillating_morse(morse_frequency)
    rows = []
    for n in n_list:
        n = int(n)
        K = max(k_min, resolution_factor * n * morse_frequency)
        T = max(t_min, resolution_factor * n)
        base = _horizontal_base(f0, f1, K, T)
        zig = zigzag_path(base, ZigzagConfig(n=n, morse_alpha=alpha_fn))
        L, _ = path_length_energy(zig, A=A, horizontal_only=True)
        rows.append({
            "n": n,
            "K": K,
            "T": T,
            "L_hor": L,
            "vol_max": float(path_volumes(zig).max()),
        })
    return rows
