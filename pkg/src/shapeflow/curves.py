"""Discrete differential geometry of closed curves.

A closed curve in R^d (d = 2 or 3) is sampled at the uniform periodic
parameters theta_j = 2*pi*j/K.  Derivatives in theta are spectral, so for a
curve f the pullback metric is the scalar field |f_theta|^2, the volume
density is |f_theta| d(theta), and the mean curvature is the normal projection
(f_theta_theta)^perp / |f_theta|^2.
"""

from dataclasses import dataclass

import numpy as np

from . import spectral
from .errors import DegenerateImmersionError, InvalidGridError

# a node counts as degenerate when its speed collapses relative to the curve
SPEED_FLOOR = 1e-12


@dataclass(frozen=True)
class DiscreteCurve:
    """Closed curve given by K points in R^d at parameters theta_j = 2*pi*j/K."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] not in (2, 3):
            raise InvalidGridError(
                f"curve points must have shape (K, d) with d in {{2, 3}}, got {pts.shape}"
            )
        spectral.check_grid(pts.shape[0])
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def K(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def thetas(self) -> np.ndarray:
        return spectral.grid(self.K)


@dataclass(frozen=True)
class FieldAlongCurve:
    """Vector field along a curve: one R^d vector per curve node."""

    vectors: np.ndarray

    def __post_init__(self):
        vec = np.array(self.vectors, dtype=float)
        if vec.ndim != 2 or vec.shape[1] not in (2, 3):
            raise InvalidGridError(
                f"field vectors must have shape (K, d) with d in {{2, 3}}, got {vec.shape}"
            )
        vec.setflags(write=False)
        object.__setattr__(self, "vectors", vec)

    @property
    def K(self) -> int:
        return self.vectors.shape[0]

    @property
    def d(self) -> int:
        return self.vectors.shape[1]


@dataclass(frozen=True)
class CurveFrame:
    """Per-node first-order data of an immersed curve.

    derivative   f_theta at every node
    speed        |f_theta| (the pullback metric is speed^2, dim M = 1)
    unit_tangent f_theta / |f_theta|
    vol_density  volume density of f*g, equal to speed for curves
    total_volume Vol = sum_j speed_j * (2*pi/K), the curve length
    """

    derivative: np.ndarray
    speed: np.ndarray
    unit_tangent: np.ndarray
    vol_density: np.ndarray
    total_volume: float


def _as_points(f) -> np.ndarray:
    return f.points if isinstance(f, DiscreteCurve) else np.asarray(f, dtype=float)


def _as_vectors(h) -> np.ndarray:
    return h.vectors if isinstance(h, FieldAlongCurve) else np.asarray(h, dtype=float)


def check_field_matches(f: DiscreteCurve, h) -> np.ndarray:
    vec = _as_vectors(h)
    if vec.shape != f.points.shape:
        raise InvalidGridError(
            f"field shape {vec.shape} does not match curve shape {f.points.shape}"
        )
    return vec


def curve_frame(f: DiscreteCurve) -> CurveFrame:
    """First-order frame of the curve; raises if the immersion degenerates."""
    pts = _as_points(f)
    deriv = spectral.differentiate_periodic(pts, axis=0)
    speed = np.linalg.norm(deriv, axis=1)
    if not np.all(np.isfinite(speed)) or speed.min() <= SPEED_FLOOR * max(speed.max(), 1.0):
        raise DegenerateImmersionError(
            f"curve speed collapses: min |f_theta| = {speed.min():.3e}"
        )
    tangent = deriv / speed[:, None]
    total = float(spectral.periodic_integral(speed))
    return CurveFrame(deriv, speed, tangent, speed.copy(), total)


def split_tangential_normal(f: DiscreteCurve, h) -> tuple[np.ndarray, FieldAlongCurve]:
    """Split h = h_top * f_theta + h_perp with g(h_perp, f_theta) = 0 pointwise.

    Returns the tangential coefficient field h_top (so Tf.h^top = h_top * f_theta)
    and the normal part h_perp.
    """
    vec = check_field_matches(f, h)
    frame = curve_frame(f)
    h_top = np.einsum("ij,ij->i", vec, frame.derivative) / frame.speed**2
    h_perp = vec - h_top[:, None] * frame.derivative
    return h_top, FieldAlongCurve(h_perp)


def mean_curvature(f: DiscreteCurve) -> FieldAlongCurve:
    """Mean curvature vector Tr(S) = (f_theta_theta)^perp / |f_theta|^2.

    For a circle of radius r this has norm 1/r and points inward.
    """
    pts = _as_points(f)
    frame = curve_frame(f)
    second = spectral.differentiate_periodic(pts, order=2, axis=0)
    tang = np.einsum("ij,ij->i", second, frame.unit_tangent)
    normal_part = second - tang[:, None] * frame.unit_tangent
    return FieldAlongCurve(normal_part / frame.speed[:, None] ** 2)


def volume_first_variation(f: DiscreteCurve, h) -> float:
    """Derivative of the total volume (length) in the direction h.

    Equals -integral of g(Tr S, h^perp) vol(f*g); the divergence of the
    tangential part integrates to zero over the closed curve, so only the
    normal part of h contributes (Tr S is normal, making the projection of h
    implicit in the inner product).
    """
    vec = check_field_matches(f, h)
    frame = curve_frame(f)
    trs = mean_curvature(f).vectors
    integrand = -np.einsum("ij,ij->i", trs, vec) * frame.vol_density
    return float(spectral.periodic_integral(integrand))


def resample_curve(f: DiscreteCurve, k_new: int) -> DiscreteCurve:
    """Trigonometric resampling of a curve onto a finer/coarser uniform grid."""
    return DiscreteCurve(spectral.resample_periodic(f.points, k_new, axis=0))


def circle(radius=1.0, K=64, center=(0.0, 0.0)) -> DiscreteCurve:
    """Circle of given radius, sampled counterclockwise."""
    th = spectral.grid(K)
    pts = np.stack([center[0] + radius * np.cos(th), center[1] + radius * np.sin(th)], axis=1)
    return DiscreteCurve(pts)
