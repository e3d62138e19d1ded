"""The mean-curvature-weighted metric on immersed curves and its path bounds.

The inner product at a curve f weighs the flat L^2 pairing by
(1 + A * |Tr S|^2) against the volume density of f:

    inner_A(f; h, k) = integral (1 + A*|Tr S|^2) g(h, k) vol(f*g).

Horizontal length/energy of a path use only the normal part of the velocity;
they are the quantities that descend to the quotient of curves modulo
reparametrization.  This module also carries the three quantitative path
bounds: the Lipschitz bound on sqrt(Vol), the swept-area bound, and the
graph-volume form of the horizontal energy.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from . import spectral
from .curves import DiscreteCurve, check_field_matches, curve_frame, mean_curvature
from .errors import InvalidGridError, ParameterError

MIN_TIME_STEPS = 8


@dataclass(frozen=True)
class ImmersionPath:
    """Time-indexed family of curves on a uniform time grid.

    `velocities` may carry the exact time derivative per node; when absent,
    operations fall back to 4th-order finite differences in t.
    """

    times: np.ndarray
    curves: tuple
    velocities: np.ndarray | None = None

    def __post_init__(self):
        times = np.array(self.times, dtype=float)
        if times.ndim != 1 or times.size < MIN_TIME_STEPS + 1:
            raise InvalidGridError(
                f"path needs at least {MIN_TIME_STEPS + 1} time samples, got {times.size}"
            )
        dts = np.diff(times)
        if dts.min() <= 0 or np.ptp(dts) > 1e-9 * (times[-1] - times[0]):
            raise InvalidGridError("path times must be uniform and increasing")
        curves = tuple(
            c if isinstance(c, DiscreteCurve) else DiscreteCurve(c) for c in self.curves
        )
        if len(curves) != times.size:
            raise InvalidGridError("number of curves must match number of times")
        k, d = curves[0].K, curves[0].d
        if any(c.K != k or c.d != d for c in curves):
            raise InvalidGridError("all curves on a path must share K and d")
        stack = np.stack([c.points for c in curves])
        for c in curves:
            curve_frame(c)  # raises if any slice degenerates
        vel = self.velocities
        if vel is not None:
            vel = np.array(vel, dtype=float)
            if vel.shape != stack.shape:
                raise InvalidGridError("velocities must have shape (T+1, K, d)")
            vel.setflags(write=False)
        times.setflags(write=False)
        stack.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "curves", curves)
        object.__setattr__(self, "velocities", vel)
        object.__setattr__(self, "_stack", stack)

    @property
    def stack(self) -> np.ndarray:
        """Curve points as one (T+1, K, d) array."""
        return self._stack

    @property
    def T(self) -> int:
        return self.times.size - 1

    @property
    def K(self) -> int:
        return self.curves[0].K

    @property
    def d(self) -> int:
        return self.curves[0].d

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])

    def velocity_samples(self) -> np.ndarray:
        """Carried velocities, or 4th-order finite differences in t."""
        if self.velocities is not None:
            return self.velocities
        return spectral.differentiate_uniform(self.stack, self.dt, axis=0)


@dataclass(frozen=True)
class BoundReport:
    """Two sides of a proved inequality, and whether the data respects it."""

    lhs: float
    rhs: float
    gap: float
    satisfied: bool
    details: dict = field(default_factory=dict)


def make_report(lhs: float, rhs: float, details: dict | None = None) -> BoundReport:
    gap = rhs - lhs
    tol = 1e-8 * max(1.0, abs(rhs))
    return BoundReport(float(lhs), float(rhs), float(gap), bool(gap >= -tol), details or {})


def ga_inner(f: DiscreteCurve, h, k, A: float) -> float:
    """Weighted inner product integral (1 + A |TrS|^2) g(h,k) vol(f*g)."""
    if A < 0:
        raise ParameterError(f"metric weight A must be >= 0, got {A}")
    hv = check_field_matches(f, h)
    kv = check_field_matches(f, k)
    frame = curve_frame(f)
    weight = 1.0 + A * np.sum(mean_curvature(f).vectors ** 2, axis=1)
    integrand = weight * np.einsum("ij,ij->i", hv, kv) * frame.vol_density
    return float(spectral.periodic_integral(integrand))


def path_arrays(path: ImmersionPath):
    """Spectral theta-derivatives, speeds and velocities for every slice."""
    stack = path.stack
    deriv = spectral.differentiate_periodic(stack, axis=1)
    speed = np.linalg.norm(deriv, axis=2)
    vel = path.velocity_samples()
    return stack, deriv, speed, vel


def horizontality_residual(path: ImmersionPath) -> float:
    """max over (t, theta) of |g(f_t, f_theta)| / (|f_t| |f_theta| + tol)."""
    _, deriv, speed, vel = path_arrays(path)
    dots = np.abs(np.einsum("tij,tij->ti", vel, deriv))
    scale = np.linalg.norm(vel, axis=2) * speed
    tol = 1e-12 * max(scale.max(), 1.0)
    return float((dots / (scale + tol)).max())


def make_horizontal(path: ImmersionPath) -> ImmersionPath:
    """Reparametrize each slice so the velocity becomes pointwise normal.

    Solves the node-wise flow phi_t = xi(t, phi) with
    xi = -g(f_t, f_theta)/|f_theta|^2 by RK4 (cubic interpolation of xi in t,
    periodic cubic splines in theta), then evaluates curve and normal velocity
    at the flowed parameters by trigonometric interpolation.  The returned
    path starts at the identical initial curve, ends at a reparametrization of
    the final curve, and carries the exact horizontal velocities
    (f_t + xi f_theta) o phi = f_t^perp o phi.
    """
    stack, deriv, speed, vel = path_arrays(path)
    times = path.times
    n_t, K = stack.shape[0], stack.shape[1]
    tangential = np.einsum("tij,tij->ti", vel, deriv) / speed**2
    xi = -tangential
    vel_perp = vel - tangential[..., None] * deriv

    thetas = spectral.grid(K)
    xs = np.concatenate([thetas, [spectral.TWO_PI]])

    spline_cache: dict[float, CubicSpline] = {}

    def xi_field(t: float) -> CubicSpline:
        key = round(float(t), 12)
        if key not in spline_cache:
            vals = _lagrange_time_slice(xi, times, t)
            ys = np.concatenate([vals, vals[:1]])
            spline_cache[key] = CubicSpline(xs, ys, bc_type="periodic")
        return spline_cache[key]

    def rhs(t, state):
        (pos,) = state
        return (xi_field(t)(np.mod(pos, spectral.TWO_PI)),)

    flowed = np.empty((n_t, K))
    pos = thetas.copy()
    flowed[0] = pos
    for i in range(n_t - 1):
        h = times[i + 1] - times[i]
        (pos,) = spectral.rk4_step(rhs, times[i], (pos,), h)
        flowed[i + 1] = pos
        spline_cache.clear()

    new_pts = np.empty_like(stack)
    new_vel = np.empty_like(stack)
    new_pts[0] = stack[0]
    new_vel[0] = vel_perp[0]
    for i in range(1, n_t):
        new_pts[i] = spectral.trig_interpolate(stack[i], flowed[i])
        new_vel[i] = spectral.trig_interpolate(vel_perp[i], flowed[i])

    return ImmersionPath(times, tuple(DiscreteCurve(p) for p in new_pts), new_vel)


def _lagrange_time_slice(values, times, t):
    """Cubic Lagrange interpolation of (T+1, ...) data at scalar time t."""
    n = times.size
    j = int(np.searchsorted(times, t) - 1)
    lo = min(max(j - 1, 0), n - 4)
    idx = np.arange(lo, lo + 4)
    ts = times[idx]
    out = np.zeros_like(values[0])
    for a in range(4):
        w = 1.0
        for b in range(4):
            if a != b:
                w *= (t - ts[b]) / (ts[a] - ts[b])
        out = out + w * values[idx[a]]
    return out


def _weights(path: ImmersionPath, A: float) -> np.ndarray:
    if A == 0.0:
        return np.ones((path.T + 1, path.K))
    return np.stack(
        [1.0 + A * np.sum(mean_curvature(c).vectors ** 2, axis=1) for c in path.curves]
    )


def path_length_energy(path: ImmersionPath, A: float = 0.0, horizontal_only: bool = False):
    """Arc length L and energy E = 1/2 integral of the squared speed of a path.

    With `horizontal_only` the velocities are replaced by their normal parts,
    giving the horizontal (quotient) length L^hor.  Always L^2 <= 2 E (t1-t0).
    """
    if A < 0:
        raise ParameterError(f"metric weight A must be >= 0, got {A}")
    _, deriv, speed, vel = path_arrays(path)
    if horizontal_only:
        tang = np.einsum("tij,tij->ti", vel, deriv) / speed**2
        vel = vel - tang[..., None] * deriv
    weight = _weights(path, A)
    sq = weight * np.sum(vel**2, axis=2) * speed
    g_t = spectral.periodic_integral(sq, axis=1)
    L = float(np.trapezoid(np.sqrt(g_t), path.times))
    E = float(0.5 * np.trapezoid(g_t, path.times))
    return L, E


def path_volumes(path: ImmersionPath) -> np.ndarray:
    return np.array([curve_frame(c).total_volume for c in path.curves])


def lipschitz_gap(path: ImmersionPath, A: float) -> BoundReport:
    """Check sqrt(Vol(end)) - sqrt(Vol(start)) <= L^hor / (2 sqrt(A))."""
    if A <= 0:
        raise ParameterError("the Lipschitz bound needs A > 0")
    vols = path_volumes(path)
    lhs = np.sqrt(vols[-1]) - np.sqrt(vols[0])
    L, _ = path_length_energy(path, A=A, horizontal_only=True)
    rhs = L / (2.0 * np.sqrt(A))
    return make_report(lhs, rhs, {"vol_start": vols[0], "vol_end": vols[-1], "length_hor": L})


def swept_volume(path: ImmersionPath, A: float = 0.0) -> BoundReport:
    """Check the swept-area bound: area <= max_t sqrt(Vol) * L^hor.

    The left side is the integral of the normal speed against the volume
    density, the quantity through which the sweep is controlled.
    """
    _, deriv, speed, vel = path_arrays(path)
    tang = np.einsum("tij,tij->ti", vel, deriv) / speed**2
    vel_perp = vel - tang[..., None] * deriv
    densities = np.linalg.norm(vel_perp, axis=2) * speed
    lhs = float(np.trapezoid(spectral.periodic_integral(densities, axis=1), path.times))
    vols = path_volumes(path)
    L, _ = path_length_energy(path, A=A, horizontal_only=True)
    rhs = float(np.sqrt(vols.max()) * L)
    return make_report(lhs, rhs, {"max_vol": float(vols.max()), "length_hor": L})


def graph_energy(path: ImmersionPath, A: float = 0.0) -> float:
    """Horizontal energy expressed as an anisotropic volume of the path's graph.

    Integrates (1 + A|TrS|^2) * |f_t^perp|^2 / sqrt(1 + |f_t^perp|^2) against
    the volume density of the graph (t, x) -> (t, f(t, x)) in R x R^d.  For
    horizontal paths this equals the time-slice energy of path_length_energy.
    """
    if A < 0:
        raise ParameterError(f"metric weight A must be >= 0, got {A}")
    _, deriv, speed, vel = path_arrays(path)
    cross = np.einsum("tij,tij->ti", vel, deriv)
    full_sq = np.sum(vel**2, axis=2)
    perp_sq = full_sq - cross**2 / speed**2
    graph_det = (1.0 + full_sq) * speed**2 - cross**2
    weight = _weights(path, A)
    integrand = weight * perp_sq / np.sqrt(1.0 + perp_sq) * np.sqrt(graph_det)
    return float(0.5 * np.trapezoid(spectral.periodic_integral(integrand, axis=1), path.times))


def linear_interpolation_path(f0: DiscreteCurve, f1: DiscreteCurve, n_times: int,
                              t0: float = 0.0, t1: float = 1.0) -> ImmersionPath:
    """Straight-line path (1-s) f0 + s f1 on a uniform time grid."""
    if f0.K != f1.K or f0.d != f1.d:
        raise InvalidGridError("endpoint curves must share K and d")
    times = np.linspace(t0, t1, n_times)
    s = (times - t0) / (t1 - t0)
    pts = (1.0 - s)[:, None, None] * f0.points + s[:, None, None] * f1.points
    vel = np.broadcast_to((f1.points - f0.points) / (t1 - t0), pts.shape).copy()
    return ImmersionPath(times, tuple(DiscreteCurve(p) for p in pts), vel)
