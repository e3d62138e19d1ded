"""Seeded generators for random smooth curves, fields, and paths.

Shared by the CLI experiments and the test suite so that "random sweep"
results are reproducible from a single integer seed.
"""

import numpy as np

from . import spectral
from .curves import DiscreteCurve, FieldAlongCurve
from .metric import ImmersionPath


def trig_samples(rng, K, modes=4, amp=1.0, decay=2.0):
    """Random real trigonometric polynomial sampled on the K-grid."""
    th = spectral.grid(K)
    out = np.zeros(K)
    for m in range(1, modes + 1):
        a, b = rng.normal(size=2)
        out += (amp / m**decay) * (a * np.cos(m * th) + b * np.sin(m * th))
    return out


def random_curve(rng, K, d=2, amp=0.25, modes=4) -> DiscreteCurve:
    """Smooth perturbation of the unit circle, rejection-sampled to stay far
    from the immersion boundary (small speeds poison spectral accuracy)."""
    th = spectral.grid(K)
    base = np.stack([np.cos(th), np.sin(th)], axis=1)
    if d == 3:
        base = np.concatenate([base, np.zeros((K, 1))], axis=1)
    while True:
        pts = base + np.stack([trig_samples(rng, K, modes, amp) for _ in range(d)], axis=1)
        deriv = spectral.differentiate_periodic(pts, axis=0)
        speed = np.linalg.norm(deriv, axis=1)
        if speed.min() > 0.35 * speed.max():
            return DiscreteCurve(pts)


def random_field(rng, K, d=2, amp=1.0, modes=4) -> FieldAlongCurve:
    return FieldAlongCurve(
        np.stack([trig_samples(rng, K, modes, amp) for _ in range(d)], axis=1)
    )


def random_normal_field(rng, f: DiscreteCurve, amp=1.0, modes=4) -> FieldAlongCurve:
    """Random field projected pointwise onto the normal bundle of f."""
    from .curves import curve_frame

    raw = random_field(rng, f.K, f.d, amp, modes).vectors
    tangent = curve_frame(f).unit_tangent
    return FieldAlongCurve(raw - np.einsum("ij,ij->i", raw, tangent)[:, None] * tangent)


def random_path(rng, K, n_times=17, amp=0.1, modes=3) -> ImmersionPath:
    """Smooth-in-time perturbation path around a random curve."""
    base = random_curve(rng, K).points
    times = np.linspace(0.0, 1.0, n_times)
    pts = np.empty((n_times, K, base.shape[1]))
    th = spectral.grid(K)
    fields = [
        np.stack([trig_samples(rng, K, modes, amp) for _ in range(base.shape[1])], axis=1)
        for _ in range(2)
    ]
    freqs = 1.0 + rng.uniform(0.0, 1.0, size=2)
    for i, t in enumerate(times):
        wobble = np.sin(freqs[0] * t) * fields[0] + (np.cos(freqs[1] * t) - 1.0) * fields[1]
        pts[i] = base + t * fields[0] * 0.5 + wobble * 0.5
    return ImmersionPath(times, tuple(DiscreteCurve(p) for p in pts))


def random_periodic_field_1d(rng, K, modes=5, amp=1.0):
    from .diffgroup import PeriodicField

    return PeriodicField((trig_samples(rng, K, modes, amp, decay=1.0),))


def smooth_bump(center, halfwidth, height=1.0):
    """Standard compactly supported bump, C-infinity, as a callable."""

    def g(x):
        s = (np.asarray(x, dtype=float) - center) / halfwidth
        out = np.zeros_like(s)
        inside = np.abs(s) < 1.0
        out[inside] = height * np.exp(1.0 - 1.0 / (1.0 - s[inside] ** 2))
        return out

    return g
