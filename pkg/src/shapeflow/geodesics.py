"""Geodesic flow of the unweighted metric on immersed curves.

The acceleration of a geodesic in the space of immersions (flat ambient
space, so covariant time derivatives are plain second derivatives) is

    f_tt = -div(f_t^top) f_t + g(f_t^perp, TrS) f_t
           - 1/2 Df.grad(|f_t|^2) - 1/2 |f_t|^2 TrS

with all operators taken in the pullback metric of the curve.  Restricted to
horizontal velocities on plane curves this reduces to the scalar law
a_t = 1/2 * kappa * a^2 for the normal speed a, where kappa is the signed
curvature in the leftward unit normal.
"""

from dataclasses import dataclass

import numpy as np

from . import spectral
from .curves import DiscreteCurve, FieldAlongCurve, check_field_matches, curve_frame, mean_curvature
from .errors import DegenerateImmersionError, ParameterError

# stopping thresholds: the flow may leave the immersion space in finite time
MIN_SPEED_RATIO = 1e-6
MAX_CURVATURE = 1e6


@dataclass(frozen=True)
class GeodesicState:
    """Curve, velocity field, and time along a geodesic."""

    f: DiscreteCurve
    v: FieldAlongCurve
    t: float

    def __post_init__(self):
        check_field_matches(self.f, self.v)


@dataclass(frozen=True)
class GeodesicTrajectory:
    """Integrated geodesic: states, per-state kinetic energies, stop diagnostics."""

    states: tuple
    energies: np.ndarray
    stopped_early: bool = False
    reason: str | None = None

    def __len__(self):
        return len(self.states)

    def __getitem__(self, i):
        return self.states[i]

    def __iter__(self):
        return iter(self.states)


def _geometry(points: np.ndarray):
    deriv = spectral.differentiate_periodic(points, axis=0)
    speed = np.linalg.norm(deriv, axis=1)
    if speed.min() <= 1e-12 * max(speed.max(), 1.0):
        raise DegenerateImmersionError("geodesic state has degenerate speed")
    second = spectral.differentiate_periodic(points, order=2, axis=0)
    tang_coeff = np.einsum("ij,ij->i", second, deriv) / speed**2
    trs = (second - tang_coeff[:, None] * deriv) / speed[:, None] ** 2
    return deriv, speed, trs


def _acceleration(points: np.ndarray, vel: np.ndarray) -> np.ndarray:
    deriv, speed, trs = _geometry(points)
    c = np.einsum("ij,ij->i", vel, deriv) / speed**2  # f_t^top = c * d/dtheta
    v_perp = vel - c[:, None] * deriv
    div_top = spectral.differentiate_periodic(c * speed) / speed
    norm_sq = np.sum(vel**2, axis=1)
    grad_vec = (spectral.differentiate_periodic(norm_sq) / speed**2)[:, None] * deriv
    coupling = np.einsum("ij,ij->i", v_perp, trs)
    return (
        -div_top[:, None] * vel
        + coupling[:, None] * vel
        - 0.5 * grad_vec
        - 0.5 * norm_sq[:, None] * trs
    )


def imm_geodesic_rhs(state: GeodesicState) -> FieldAlongCurve:
    """Acceleration field of the geodesic equation at the given state."""
    return FieldAlongCurve(_acceleration(state.f.points, state.v.vectors))


def leftward_normal(f: DiscreteCurve) -> np.ndarray:
    """Unit normal obtained by rotating the unit tangent by +90 degrees (d = 2)."""
    if f.d != 2:
        raise ParameterError("leftward normal is defined for plane curves only")
    tangent = curve_frame(f).unit_tangent
    return np.stack([-tangent[:, 1], tangent[:, 0]], axis=1)


def signed_curvature(f: DiscreteCurve) -> np.ndarray:
    """kappa with TrS = kappa * n for the leftward normal n (d = 2)."""
    n = leftward_normal(f)
    return np.einsum("ij,ij->i", mean_curvature(f).vectors, n)


def horizontal_geodesic_rhs(f: DiscreteCurve, a: np.ndarray) -> np.ndarray:
    """Scalar acceleration a_t = 1/2 * kappa * a^2 of the horizontal flow (d = 2)."""
    if f.d != 2:
        raise ParameterError("horizontal reduction is for plane curves; use the full equation in R^3")
    a = np.asarray(a, dtype=float)
    if a.shape != (f.K,):
        raise ParameterError(f"scalar field must have shape ({f.K},)")
    return 0.5 * signed_curvature(f) * a**2


def kinetic_energy(points: np.ndarray, vel: np.ndarray) -> float:
    deriv = spectral.differentiate_periodic(points, axis=0)
    speed = np.linalg.norm(deriv, axis=1)
    return float(spectral.periodic_integral(np.sum(vel**2, axis=1) * speed))


def integrate_geodesic(s0: GeodesicState, T_end: float, steps: int,
                       mode: str = "full") -> GeodesicTrajectory:
    """RK4 integration of the geodesic flow from s0 over [t0, t0 + T_end].

    In "horizontal" mode (plane curves, velocity pointwise normal) the state
    is reduced to the curve plus its normal speed.  Integration stops early,
    with a diagnostic, when the curve is about to leave the immersion space
    (collapsing speed or exploding curvature).
    """
    if steps < 16:
        raise ParameterError(f"need at least 16 steps, got {steps}")
    if mode not in ("full", "horizontal"):
        raise ParameterError(f"unknown mode {mode!r}")
    points0 = s0.f.points
    vel0 = s0.v.vectors
    if mode == "horizontal":
        if s0.f.d != 2:
            raise ParameterError("horizontal mode needs plane curves")
        n0 = leftward_normal(s0.f)
        tang = vel0 - np.einsum("ij,ij->i", vel0, n0)[:, None] * n0
        scale = max(np.linalg.norm(vel0, axis=1).max(), 1.0)
        if np.abs(tang).max() > 1e-10 * scale:
            raise ParameterError("horizontal mode needs a pointwise-normal initial velocity")

    initial_min_speed = curve_frame(s0.f).speed.min()
    h = T_end / steps

    def full_rhs(t, state):
        pts, vel = state
        return vel, _acceleration(pts, vel)

    def horizontal_rhs(t, state):
        pts, a = state
        curve = DiscreteCurve(pts)
        n = leftward_normal(curve)
        return a[:, None] * n, 0.5 * signed_curvature(curve) * a**2

    if mode == "full":
        state = (points0.copy(), vel0.copy())
        rhs = full_rhs
    else:
        n0 = leftward_normal(s0.f)
        state = (points0.copy(), np.einsum("ij,ij->i", vel0, n0))
        rhs = horizontal_rhs

    def unpack(state, t):
        pts = state[0]
        if mode == "full":
            vel = state[1]
        else:
            vel = state[1][:, None] * leftward_normal(DiscreteCurve(pts))
        return GeodesicState(DiscreteCurve(pts), FieldAlongCurve(vel), t)

    states = [unpack(state, s0.t)]
    energies = [kinetic_energy(states[0].f.points, states[0].v.vectors)]
    stopped, reason = False, None
    t = s0.t
    for _ in range(steps):
        try:
            new_state = spectral.rk4_step(rhs, t, state, h)
            deriv, speed, trs = _geometry(new_state[0])
        except DegenerateImmersionError as exc:
            stopped, reason = True, str(exc)
            break
        if speed.min() < MIN_SPEED_RATIO * initial_min_speed:
            stopped, reason = True, (
                f"speed collapsed to {speed.min():.3e} "
                f"(below {MIN_SPEED_RATIO:.0e} of initial)"
            )
            break
        if np.linalg.norm(trs, axis=1).max() > MAX_CURVATURE:
            stopped, reason = True, "curvature norm exceeded limit"
            break
        state = new_state
        t += h
        st = unpack(state, t)
        states.append(st)
        energies.append(kinetic_energy(st.f.points, st.v.vectors))

    return GeodesicTrajectory(tuple(states), np.array(energies), stopped, reason)
