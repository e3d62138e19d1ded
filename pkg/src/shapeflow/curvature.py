"""Christoffel symbol and sectional curvature of the quotient space of curves.

At a curve f, for pointwise-normal fields a, b the Christoffel symbol is

    Gamma(a, b) = -1/2 g(a,b) TrS + 1/2 g(a,TrS) b + 1/2 g(b,TrS) a

and the curvature pairing R(x,y,x,y) decomposes into seven integrands.  In a
flat ambient space the two terms carrying ambient curvature vanish; they are
kept as explicit zeros so reports preserve the term numbering.  For plane
curves (codimension one) every wedge-built term vanishes as well, leaving a
single non-positive term: sectional curvature is then non-negative.
"""

from dataclasses import dataclass

import numpy as np

from . import spectral
from .curves import DiscreteCurve, FieldAlongCurve, check_field_matches, curve_frame, mean_curvature
from .errors import DegeneratePlaneError, NonNormalFieldError

NORMALITY_TOL = 1e-8


@dataclass(frozen=True)
class CurvatureBreakdown:
    """Integrated curvature terms; total = sum of the seven terms as summed."""

    term1: float
    term2: float
    term3: float
    term4: float
    term5: float
    term6: float
    term7: float
    total: float
    sectional: float

    def terms(self) -> np.ndarray:
        return np.array([self.term1, self.term2, self.term3, self.term4,
                         self.term5, self.term6, self.term7])


def _require_normal(f: DiscreteCurve, x, name: str) -> np.ndarray:
    vec = check_field_matches(f, x)
    deriv = curve_frame(f).derivative
    dots = np.abs(np.einsum("ij,ij->i", vec, deriv))
    scale = np.linalg.norm(vec, axis=1) * np.linalg.norm(deriv, axis=1)
    if (dots / (scale + 1e-300)).max() > NORMALITY_TOL:
        raise NonNormalFieldError(f"field {name!r} is not pointwise normal to the curve")
    return vec


def christoffel0(f: DiscreteCurve, a, b):
    """Christoffel symbol of the unweighted metric on normal fields (symmetric in a, b)."""
    av = _require_normal(f, a, "a")
    bv = _require_normal(f, b, "b")
    trs = mean_curvature(f).vectors
    g_ab = np.einsum("ij,ij->i", av, bv)
    q_a = np.einsum("ij,ij->i", av, trs)
    q_b = np.einsum("ij,ij->i", bv, trs)
    return FieldAlongCurve(
        -0.5 * g_ab[:, None] * trs + 0.5 * q_a[:, None] * bv + 0.5 * q_b[:, None] * av
    )


def _wedge(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Coordinates of x ^ y: a scalar for d = 2, the cross product for d = 3.

    Squared norms of wedges computed this way are sums of squares, so the
    sign constraints on the curvature terms hold exactly in floating point.
    """
    if x.shape[1] == 2:
        return x[:, 0] * y[:, 1] - x[:, 1] * y[:, 0]
    return np.cross(x, y)


def _wedge_norm_sq(w: np.ndarray) -> np.ndarray:
    if w.ndim == 1:
        return w**2
    return np.sum(w**2, axis=1)


def curvature_terms(f: DiscreteCurve, x, y) -> CurvatureBreakdown:
    """Seven-term decomposition of the curvature pairing R(x,y,x,y).

    All terms are integrated against the volume density.  Signs by
    construction: terms 1, 2, 6 <= 0 and terms 3, 7 >= 0; terms 4 and 5 are
    the ambient-curvature slots, identically zero in flat space.
    """
    xv = _require_normal(f, x, "x")
    yv = _require_normal(f, y, "y")
    frame = curve_frame(f)
    speed, vol = frame.speed, frame.vol_density
    trs = mean_curvature(f).vectors

    q_x = np.einsum("ij,ij->i", trs, xv)
    q_y = np.einsum("ij,ij->i", trs, yv)

    # trace of the Weingarten map in dim 1 is g(TrS, .), so the semidefinite
    # form Tr(L o L) polarized on x ^ y collapses to |q_x y - q_y x|^2
    mix = q_x[:, None] * yv - q_y[:, None] * xv
    mix_sq = np.sum(mix**2, axis=1)
    term1 = -0.5 * spectral.periodic_integral(mix_sq * vol)
    term2 = -0.25 * spectral.periodic_integral(mix_sq * vol)

    wedge_xy_sq = _wedge_norm_sq(_wedge(xv, yv))
    trs_sq = np.sum(trs**2, axis=1)
    term3 = 0.25 * spectral.periodic_integral(wedge_xy_sq * trs_sq * vol)

    term4 = 0.0  # ambient curvature term, flat R^d
    term5 = 0.0  # ambient Ricci term, flat R^d

    # normal covariant derivative: normal projection of the theta-derivative;
    # one-form norms contract with 1/speed^2
    tangent = frame.unit_tangent
    dx = spectral.differentiate_periodic(xv, axis=0)
    dy = spectral.differentiate_periodic(yv, axis=0)
    dx_perp = dx - np.einsum("ij,ij->i", dx, tangent)[:, None] * tangent
    dy_perp = dy - np.einsum("ij,ij->i", dy, tangent)[:, None] * tangent

    skew = np.einsum("ij,ij->i", xv, dy_perp) - np.einsum("ij,ij->i", yv, dx_perp)
    term6 = -0.5 * spectral.periodic_integral(skew**2 / speed**2 * vol)

    wedge_mix = _wedge(xv, dy_perp) - _wedge(yv, dx_perp)
    term7 = 0.5 * spectral.periodic_integral(_wedge_norm_sq(wedge_mix) / speed**2 * vol)

    total = term1 + term2 + term3 + term4 + term5 + term6 + term7

    nx2 = spectral.periodic_integral(np.sum(xv**2, axis=1) * vol)
    ny2 = spectral.periodic_integral(np.sum(yv**2, axis=1) * vol)
    inner = spectral.periodic_integral(np.einsum("ij,ij->i", xv, yv) * vol)
    denom = nx2 * ny2 - inner**2
    sectional = -total / denom if denom > 1e-10 * max(1.0, nx2 * ny2) else float("nan")

    return CurvatureBreakdown(
        float(term1), float(term2), float(term3), float(term4), float(term5),
        float(term6), float(term7), float(total), float(sectional),
    )


def sectional_curvature(f: DiscreteCurve, x, y) -> float:
    """k = -R(x,y,x,y) / (|x|^2 |y|^2 - <x,y>^2), norms in the unweighted metric."""
    breakdown = curvature_terms(f, x, y)
    if np.isnan(breakdown.sectional):
        raise DegeneratePlaneError("x and y do not span a plane (degenerate Gram determinant)")
    return breakdown.sectional
