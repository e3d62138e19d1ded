import numpy as np
import pytest

from shapeflow import spectral
from shapeflow.errors import InvalidGridError


def test_derivative_exact_on_sine():
    th = spectral.grid(64)
    out = spectral.differentiate_periodic(np.sin(th))
    assert np.abs(out - np.cos(th)).max() < 1e-12


def test_derivative_of_constant_is_zero():
    out = spectral.differentiate_periodic(np.ones(64))
    assert np.abs(out).max() < 1e-13


def test_derivative_exact_on_cos2():
    th = spectral.grid(64)
    out = spectral.differentiate_periodic(np.cos(2 * th))
    assert np.abs(out + 2 * np.sin(2 * th)).max() < 1e-12


def test_second_derivative():
    th = spectral.grid(64)
    out = spectral.differentiate_periodic(np.sin(3 * th), order=2)
    assert np.abs(out + 9 * np.sin(3 * th)).max() < 1e-11


@pytest.mark.parametrize("k", [15, 17, 8, 2])
def test_bad_grids_rejected(k):
    with pytest.raises(InvalidGridError):
        spectral.differentiate_periodic(np.zeros(k))


def test_periodic_integral_trapezoid():
    th = spectral.grid(32)
    assert abs(spectral.periodic_integral(np.ones(32)) - 2 * np.pi) < 1e-14
    assert abs(spectral.periodic_integral(np.cos(th) ** 2) - np.pi) < 1e-13


def test_resample_band_limited_exact():
    th = spectral.grid(32)
    vals = np.cos(3 * th) - 0.5 * np.sin(5 * th)
    fine = spectral.resample_periodic(vals, 128)
    th_fine = spectral.grid(128)
    assert np.abs(fine - (np.cos(3 * th_fine) - 0.5 * np.sin(5 * th_fine))).max() < 1e-12


def test_trig_interpolate_matches_nodes_and_offgrid():
    th = spectral.grid(64)
    vals = np.sin(2 * th) + 0.3 * np.cos(5 * th)
    at_nodes = spectral.trig_interpolate(vals, th)
    assert np.abs(at_nodes - vals).max() < 1e-13
    pts = np.array([0.1, 1.7, 3.9, 6.0])
    exact = np.sin(2 * pts) + 0.3 * np.cos(5 * pts)
    assert np.abs(spectral.trig_interpolate(vals, pts) - exact).max() < 1e-8


def test_uniform_derivative_fourth_order():
    # exact on cubics, O(h^4) on sin
    xs = np.linspace(0.0, 1.0, 21)
    vals = xs**3 - 2 * xs**2
    out = spectral.differentiate_uniform(vals, xs[1] - xs[0])
    assert np.abs(out - (3 * xs**2 - 4 * xs)).max() < 1e-12

    errs = []
    for n in (33, 65):
        xs = np.linspace(0.0, 1.0, n)
        out = spectral.differentiate_uniform(np.sin(xs), xs[1] - xs[0])
        errs.append(np.abs(out - np.cos(xs)).max())
    order = np.log2(errs[0] / errs[1])
    assert order > 3.7
