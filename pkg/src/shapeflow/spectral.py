"""Fourier-collocation machinery on uniform periodic grids.

Everything in this package samples periodic quantities at theta_j = 2*pi*j/K
with K even, differentiates them spectrally, and integrates them with the
trapezoid rule (which on a uniform periodic grid is the plain Riemann sum and
is spectrally accurate for smooth data).
"""

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import InvalidGridError

TWO_PI = 2.0 * np.pi

MIN_GRID = 16


def check_grid(k):
    if k % 2 != 0 or k < MIN_GRID:
        raise InvalidGridError(
            f"periodic grid must have an even number of nodes >= {MIN_GRID}, got {k}"
        )


def grid(k):
    """Nodes theta_j = 2*pi*j/K of the uniform periodic grid."""
    check_grid(k)
    return np.arange(k) * (TWO_PI / k)


def differentiate_periodic(samples, order=1, axis=0):
    """Fourier-collocation derivative along `axis`.

    Exact (to rounding) on trigonometric polynomials of degree < K/2.  For odd
    derivative orders the Nyquist mode is dropped, the standard choice that
    keeps real input real.
    """
    samples = np.asarray(samples, dtype=float)
    k = samples.shape[axis]
    check_grid(k)
    wavenumbers = np.fft.fftfreq(k, d=1.0 / k)
    mult = (1j * wavenumbers) ** order
    if order % 2 == 1:
        mult[k // 2] = 0.0
    shape = [1] * samples.ndim
    shape[axis] = k
    spec = np.fft.fft(samples, axis=axis)
    return np.real(np.fft.ifft(spec * mult.reshape(shape), axis=axis))


def periodic_integral(samples, axis=0):
    """Trapezoid quadrature of periodic samples over [0, 2*pi)."""
    samples = np.asarray(samples, dtype=float)
    return samples.sum(axis=axis) * (TWO_PI / samples.shape[axis])


def resample_periodic(values, k_new, axis=0):
    """Resample periodic data to a new uniform grid via FFT padding/truncation.

    Exact for data band-limited below min(K, k_new)/2.
    """
    values = np.asarray(values, dtype=float)
    k = values.shape[axis]
    check_grid(k)
    check_grid(k_new)
    spec = np.fft.rfft(values, axis=axis)
    n_old = spec.shape[axis]
    n_new = k_new // 2 + 1
    shape = list(spec.shape)
    shape[axis] = n_new
    out = np.zeros(shape, dtype=complex)
    n_keep = min(n_old, n_new)
    src = [slice(None)] * spec.ndim
    dst = [slice(None)] * spec.ndim
    src[axis] = slice(0, n_keep)
    dst[axis] = slice(0, n_keep)
    out[tuple(dst)] = spec[tuple(src)]
    return np.fft.irfft(out, n=k_new, axis=axis) * (k_new / k)


def trig_interpolate(values, points, pad=16):
    """Evaluate the trigonometric interpolant of uniform samples at arbitrary points.

    The interpolant is realized by FFT zero-padding to a `pad`-times finer grid
    followed by a periodic cubic spline, whose error O((2*pi/(pad*K))^4) sits
    far below the flow/quadrature tolerances used elsewhere.  Values at the
    original nodes are reproduced exactly.

    `values` has shape (K, ...) and `points` shape (P,); the result has shape
    (P, ...).
    """
    values = np.asarray(values, dtype=float)
    k = values.shape[0]
    check_grid(k)
    fine = resample_periodic(values, pad * k, axis=0)
    m = pad * k
    xs = np.arange(m + 1) * (TWO_PI / m)
    ys = np.concatenate([fine, fine[:1]], axis=0)
    spline = CubicSpline(xs, ys, axis=0, bc_type="periodic")
    return spline(np.mod(points, TWO_PI))


_EDGE0 = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0
_EDGE1 = np.array([-3.0, -10.0, 18.0, -6.0, 1.0]) / 12.0


def differentiate_uniform(values, dx, axis=0):
    """4th-order finite-difference first derivative on a uniform non-periodic grid."""
    v = np.asarray(values, dtype=float)
    if v.shape[axis] < 5:
        raise InvalidGridError("need at least 5 samples for 4th-order differences")
    v = np.moveaxis(v, axis, 0)
    out = np.empty_like(v)
    out[2:-2] = (v[:-4] - 8.0 * v[1:-3] + 8.0 * v[3:-1] - v[4:]) / 12.0
    out[0] = np.tensordot(_EDGE0, v[:5], axes=1)
    out[1] = np.tensordot(_EDGE1, v[:5], axes=1)
    out[-1] = -np.tensordot(_EDGE0, v[-1:-6:-1], axes=1)
    out[-2] = -np.tensordot(_EDGE1, v[-1:-6:-1], axes=1)
    return np.moveaxis(out, 0, axis) / dx


def rk4_step(rhs, t, y, h):
    """One classical Runge-Kutta step for states that are tuples of arrays."""
    k1 = rhs(t, y)
    k2 = rhs(t + 0.5 * h, _axpy(y, k1, 0.5 * h))
    k3 = rhs(t + 0.5 * h, _axpy(y, k2, 0.5 * h))
    k4 = rhs(t + h, _axpy(y, k3, h))
    return tuple(
        yi + (h / 6.0) * (a + 2.0 * b + 2.0 * c + d)
        for yi, a, b, c, d in zip(y, k1, k2, k3, k4)
    )


def _axpy(y, k, h):
    return tuple(yi + h * ki for yi, ki in zip(y, k))
