"""Numerics for weak Riemannian metrics on curve spaces and diffeomorphism groups.

The package computes the mean-curvature-weighted metric on closed discrete
curves, horizontal projections and geodesics, the sectional-curvature term
decomposition on the quotient of curves by reparametrization, the geodesic
PDEs of right-invariant metrics on diffeomorphism groups (Burgers, the
n-dimensional Euler-Poincare flow, Camassa-Holm), and the explicit short-path
constructions (zig-zag reparametrizations, compression waves) that exhibit
vanishing geodesic distance for the unweighted metrics, together with the
bounds that keep the weighted distances positive.
"""

__version__ = "0.1.0"

from .curves import CurveFrame, DiscreteCurve, FieldAlongCurve, circle, curve_frame, \
    mean_curvature, split_tangential_normal, volume_first_variation
from .curvature import CurvatureBreakdown, christoffel0, curvature_terms, sectional_curvature
from .diffgroup import DiffPath1D, PeriodicField, WaveEnergyReport, basic_wave, \
    beta_operator, camassa_holm_rhs, diff_curvature, epdiff_rhs, ga_diff_inner, \
    integrate_diff_geodesic, path_lower_bound, short_path_to, wave_energy
from .geodesics import GeodesicState, GeodesicTrajectory, horizontal_geodesic_rhs, \
    imm_geodesic_rhs, integrate_geodesic
from .metric import BoundReport, ImmersionPath, ga_inner, graph_energy, lipschitz_gap, \
    make_horizontal, path_length_energy, swept_volume
from .spectral import differentiate_periodic
from .zigzag import ZigzagConfig, vanishing_sweep, zigzag_path, zigzag_phi
