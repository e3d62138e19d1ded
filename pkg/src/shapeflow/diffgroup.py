"""Right-invariant metrics on diffeomorphism groups at desk scale.

Two strands live here.  On periodic domains (the circle and the 2-torus) the
Eulerian velocity u of a geodesic of the plain L^2 metric obeys
u_t = -beta(u)u, which is Burgers' equation -3 u u_x in one dimension and the
basic Euler-Poincare equation in n dimensions; the divergence-weighted metric
turns the 1-D equation into Camassa-Holm after inverting (1 - A d_xx).  On an
interval, explicit compression waves phi(t,x) = x + f(t - lambda x) realize
large displacements with arbitrarily small L^2 energy; the same construction
with variable wave length produces a compactly supported path to x + g(x)
whose energy is O(epsilon), while a divergence-weighted lower bound keeps the
stronger metric away from zero.
"""

from dataclasses import dataclass, field

import numpy as np

from . import spectral
from .errors import (DomainError, InvalidDisplacementError, InvalidGridError,
                     InvalidWaveError, ParameterError)
from .metric import BoundReport, make_report

TWO_PI = spectral.TWO_PI


@dataclass(frozen=True)
class PeriodicField:
    """Vector field on [0, 2*pi)^n, n in {1, 2}, sampled on a uniform grid."""

    components: tuple

    def __post_init__(self):
        comps = tuple(np.array(c, dtype=float) for c in self.components)
        n = len(comps)
        if n not in (1, 2):
            raise InvalidGridError(f"spatial dimension must be 1 or 2, got {n}")
        shape = comps[0].shape
        if len(shape) != n or any(c.shape != shape for c in comps):
            raise InvalidGridError("each component must be an n-dimensional array of equal shape")
        for k in shape:
            spectral.check_grid(k)
        for c in comps:
            c.setflags(write=False)
        object.__setattr__(self, "components", comps)

    @property
    def n(self) -> int:
        return len(self.components)

    @property
    def shape(self) -> tuple:
        return self.components[0].shape

    def stack(self) -> np.ndarray:
        return np.stack(self.components)


def field_like(u: PeriodicField, arrays) -> PeriodicField:
    return PeriodicField(tuple(arrays))


def _check_same_grid(*fields):
    shape = fields[0].shape
    n = fields[0].n
    for f in fields[1:]:
        if f.n != n or f.shape != shape:
            raise InvalidGridError("fields must share dimension and grid")


def _partials(comp: np.ndarray):
    """All spatial partial derivatives of one component."""
    return [spectral.differentiate_periodic(comp, axis=ax) for ax in range(comp.ndim)]


def divergence(u: PeriodicField) -> np.ndarray:
    return sum(
        spectral.differentiate_periodic(u.components[i], axis=i) for i in range(u.n)
    )


def field_dot(u: PeriodicField, v: PeriodicField) -> np.ndarray:
    return sum(a * b for a, b in zip(u.components, v.components))


def domain_integral(values: np.ndarray) -> float:
    out = values
    for _ in range(values.ndim):
        out = spectral.periodic_integral(out, axis=0)
    return float(out)


def bracket(x: PeriodicField, y: PeriodicField) -> PeriodicField:
    """Usual analytic bracket [X, Y]^k = sum_i (X^i d_i Y^k - Y^i d_i X^k)."""
    _check_same_grid(x, y)
    out = []
    for k in range(x.n):
        dyk = _partials(y.components[k])
        dxk = _partials(x.components[k])
        out.append(sum(x.components[i] * dyk[i] - y.components[i] * dxk[i]
                       for i in range(x.n)))
    return PeriodicField(tuple(out))


def epdiff_rhs(u: PeriodicField) -> PeriodicField:
    """u_t for the L^2 geodesic flow:
    -sum_i ((d_k u^i) u^i + (d_i u^i) u^k + u^i (d_i u^k)); equals -3 u u_x in 1-D."""
    div = divergence(u)
    grads = [_partials(c) for c in u.components]  # grads[i][k] = d_k u^i
    out = []
    for k in range(u.n):
        transport = sum(u.components[i] * grads[k][i] for i in range(u.n))
        stretch = sum(grads[i][k] * u.components[i] for i in range(u.n))
        out.append(-(stretch + div * u.components[k] + transport))
    return PeriodicField(tuple(out))


def beta_operator(y: PeriodicField, z: PeriodicField) -> PeriodicField:
    """(beta(Y) Z)^k = sum_i (d_i Y^k + d_k Y^i) Z^i + div(Y) Z^k.

    beta(Y) is self-adjoint for the flat metric, and the geodesic equation is
    u_t = -beta(u) u.
    """
    _check_same_grid(y, z)
    div = divergence(y)
    grads = [_partials(c) for c in y.components]
    out = []
    for k in range(y.n):
        val = sum((grads[k][i] + grads[i][k]) * z.components[i] for i in range(y.n))
        out.append(val + div * z.components[k])
    return PeriodicField(tuple(out))


def helmholtz_invert(values: np.ndarray, A: float) -> np.ndarray:
    """(1 - A d_xx)^{-1} by Fourier-mode division, 1-D periodic."""
    k = values.shape[0]
    wavenumbers = np.fft.fftfreq(k, d=1.0 / k)
    return np.real(np.fft.ifft(np.fft.fft(values) / (1.0 + A * wavenumbers**2)))


def camassa_holm_rhs(u: PeriodicField, A: float) -> PeriodicField:
    """u_t = (1 - A d_xx)^{-1} (A u_xxx u + 2 A u_xx u_x - 3 u_x u)  (1-D).

    The inverted operator matches the divergence-weighted metric, so the
    energy integral of u^2 + A u_x^2 is conserved along the flow; A = 1 is
    the Camassa-Holm equation.
    """
    if u.n != 1:
        raise ParameterError("this flow is one-dimensional; use epdiff_rhs for n = 2")
    if A <= 0:
        raise ParameterError("need A > 0 (A = 0 is the plain Burgers flow)")
    w = u.components[0]
    w1 = spectral.differentiate_periodic(w)
    w2 = spectral.differentiate_periodic(w, order=2)
    w3 = spectral.differentiate_periodic(w, order=3)
    rhs = A * w3 * w + 2.0 * A * w2 * w1 - 3.0 * w1 * w
    return PeriodicField((helmholtz_invert(rhs, A),))


GRADIENT_BLOWUP = 1e4


@dataclass(frozen=True)
class DiffTrajectory:
    """RK4 trajectory of a geodesic flow plus a per-step invariant log."""

    times: np.ndarray
    fields: tuple
    invariants: dict
    stopped_early: bool = False
    reason: str | None = None


def _max_gradient(u: PeriodicField) -> float:
    return max(
        float(np.abs(spectral.differentiate_periodic(c, axis=ax)).max())
        for c in u.components
        for ax in range(u.n)
    )


def _invariant_row(u: PeriodicField, eq: str, A: float) -> dict:
    row = {"max_gradient": _max_gradient(u)}
    if u.n == 1:
        w = u.components[0]
        row["mass"] = domain_integral(w)
        if eq == "camassa_holm":
            wx = spectral.differentiate_periodic(w)
            row["energy"] = domain_integral(w**2 + A * wx**2)
        else:
            row["energy"] = domain_integral(w**2)
    else:
        row["mass"] = domain_integral(u.components[0])
        row["energy"] = domain_integral(field_dot(u, u))
    return row


def integrate_diff_geodesic(u0: PeriodicField, eq: str, T_end: float, steps: int,
                            A: float = 1.0) -> DiffTrajectory:
    """Integrate u_t = -ad(u)* u with RK4, logging the conserved integrals.

    eq is one of "burgers" (1-D), "epdiff", or "camassa_holm" (1-D, uses A).
    Stops early with a "wave breaking" diagnostic when the velocity gradient
    exceeds the blow-up threshold.
    """
    if steps < 64:
        raise ParameterError(f"need at least 64 steps, got {steps}")
    if eq not in ("burgers", "epdiff", "camassa_holm"):
        raise ParameterError(f"unknown equation {eq!r}")
    if eq == "burgers" and u0.n != 1:
        raise ParameterError("Burgers' equation is one-dimensional")
    if eq == "camassa_holm":
        # validates n and A once up front
        camassa_holm_rhs(u0, A)

    def rhs(t, state):
        u = PeriodicField(state)
        if eq == "camassa_holm":
            return camassa_holm_rhs(u, A).components
        return epdiff_rhs(u).components

    h = T_end / steps
    state = tuple(c.copy() for c in u0.components)
    times = [0.0]
    fields = [PeriodicField(state)]
    log = [_invariant_row(fields[0], eq, A)]
    stopped, reason = False, None
    t = 0.0
    for _ in range(steps):
        state = spectral.rk4_step(rhs, t, state, h)
        t += h
        u = PeriodicField(state)
        row = _invariant_row(u, eq, A)
        if row["max_gradient"] > GRADIENT_BLOWUP:
            stopped, reason = True, (
                f"wave breaking: max |grad u| = {row['max_gradient']:.3e} at t = {t:.4f}"
            )
            break
        times.append(t)
        fields.append(u)
        log.append(row)

    invariants = {key: np.array([r[key] for r in log]) for key in log[0]}
    return DiffTrajectory(np.array(times), tuple(fields), invariants, stopped, reason)


def diff_curvature(x: PeriodicField, y: PeriodicField) -> float:
    """Curvature pairing G(R(X,Y)X,Y) of the L^2 metric on the group.

    Evaluates (1/4) integral of -|beta(X)Y - beta(Y)X + [X,Y]|^2
    - 4 g([beta(X), beta(Y)]X, Y); in one dimension this collapses to
    -integral of [X,Y]^2.
    """
    _check_same_grid(x, y)
    br = bracket(x, y)
    bxy = beta_operator(x, y)
    byx = beta_operator(y, x)
    sym = PeriodicField(tuple(a - b + c for a, b, c in
                              zip(bxy.components, byx.components, br.components)))
    comm = PeriodicField(tuple(
        a - b for a, b in zip(beta_operator(x, beta_operator(y, x)).components,
                              beta_operator(y, beta_operator(x, x)).components)
    ))
    integrand = -field_dot(sym, sym) - 4.0 * field_dot(comm, y)
    return 0.25 * domain_integral(integrand)


def ga_diff_inner(x: PeriodicField, y: PeriodicField, A: float = 0.0) -> float:
    """Right-invariant inner product integral of g(X,Y) + A div(X) div(Y)."""
    if A < 0:
        raise ParameterError(f"metric weight A must be >= 0, got {A}")
    _check_same_grid(x, y)
    return domain_integral(field_dot(x, y) + A * divergence(x) * divergence(y))


# ---------------------------------------------------------------------------
# compression waves on an interval


@dataclass(frozen=True)
class DiffPath1D:
    """Family of monotone 1-D maps phi(t, .), rigid near the window boundary."""

    t_grid: np.ndarray
    x_grid: np.ndarray
    phi: np.ndarray
    lam: float
    epsilon: float
    displacement: np.ndarray

    def __post_init__(self):
        t = np.array(self.t_grid, dtype=float)
        x = np.array(self.x_grid, dtype=float)
        phi = np.array(self.phi, dtype=float)
        disp = np.array(self.displacement, dtype=float)
        if phi.shape != (t.size, x.size) or disp.shape != (x.size,):
            raise InvalidGridError("phi must be (n_t, n_x) and displacement (n_x,)")
        if np.diff(phi, axis=1).min() <= 0.0:
            raise InvalidWaveError("phi is not strictly increasing in x: not a diffeomorphism")
        motion = np.abs(phi - phi[0]).max(axis=0)
        scale = max(np.abs(disp).max(), 1.0)
        if motion[:2].max() > 1e-9 * scale or motion[-2:].max() > 1e-9 * scale:
            raise DomainError("wave reaches the window boundary; enlarge the window")
        for arr in (t, x, phi, disp):
            arr.setflags(write=False)
        object.__setattr__(self, "t_grid", t)
        object.__setattr__(self, "x_grid", x)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "displacement", disp)

    @property
    def dx(self) -> float:
        return float(self.x_grid[1] - self.x_grid[0])

    @property
    def dt(self) -> float:
        return float(self.t_grid[1] - self.t_grid[0])


@dataclass(frozen=True)
class WaveEnergyReport:
    """Measured kinetic energy of a wave against its analytic bound."""

    energy: float
    bound: float
    satisfied: bool
    details: dict = field(default_factory=dict)


def _bump_kernel(epsilon: float, dx: float):
    """Discrete smoothing kernel on (-epsilon, epsilon), spaced with the grid."""
    m = int(np.floor((epsilon - 1e-12 * epsilon) / dx))
    if m < 4:
        raise ParameterError(f"grid must resolve the kernel: need dx <= epsilon/8, got dx = {dx:.4g}")
    s = np.arange(-m, m + 1) * dx
    w = np.exp(-1.0 / (1.0 - (s / epsilon) ** 2))
    return s, w / w.sum()


def _smoothed_ramp(z: np.ndarray, a, epsilon: float, dx: float) -> np.ndarray:
    """max(0, min(a, .)) convolved (in the wave variable) with the bump kernel.

    Exactly 0 ahead of the wave and exactly a behind it, so constructed waves
    hit their target displacement to rounding.
    """
    nodes, weights = _bump_kernel(epsilon, dx)
    out = np.zeros_like(z)
    for s, w in zip(nodes, weights):
        out += w * np.clip(z - s, 0.0, a)
    return out


def basic_wave(lam: float, epsilon: float, t_range=None, x_range=None,
               dx: float = None, dt: float = None) -> DiffPath1D:
    """Moving compression wave phi(t,x) = x + f(t - lambda x), f a smoothed unit ramp.

    Far ahead of the front the map is the identity; far behind it is
    translation by 1; phi_x = 1 - lambda f' stays positive because
    lambda < 1 = max f'.
    """
    if epsilon <= 0 or epsilon >= 0.5:
        raise ParameterError(f"epsilon must lie in (0, 1/2), got {epsilon}")
    if lam >= 1.0 or lam <= 0.0:
        raise InvalidWaveError(
            f"wave speed parameter must satisfy lambda < 1/max(f') = 1, got {lam}")
    if t_range is None:
        t_range = (0.0, 1.0)
    if x_range is None:
        margin = 4.0 * epsilon + 0.5
        x_range = ((t_range[0] - 1.0 - epsilon) / lam - margin,
                   (t_range[1] + epsilon) / lam + margin)
    dx = epsilon / 8.0 if dx is None else dx
    if dx > epsilon / 8.0 + 1e-12:
        raise ParameterError(f"grid must resolve epsilon: dx <= epsilon/8, got {dx:.4g}")
    dt = dx if dt is None else dt
    x = _uniform(x_range, dx)
    t = _uniform(t_range, dt)
    z = t[:, None] - lam * x[None, :]
    phi = x[None, :] + _smoothed_ramp(z, 1.0, epsilon, dx)
    return DiffPath1D(t, x, phi, lam, epsilon, np.ones_like(x))


def _uniform(rng, step):
    n = int(np.ceil((rng[1] - rng[0]) / step)) + 1
    return np.linspace(rng[0], rng[1], n)


def wave_energy(path: DiffPath1D, t0: float, t1: float) -> WaveEnergyReport:
    """Kinetic energy of the wave on [t0, t1], in Lagrangian form.

    energy = integral of phi_t^2 phi_x dx dt (no inversion of phi needed);
    the bound is the analytic (t1 - t0) * 3 eps / (1 - eps) for a basic wave
    with lambda = 1 - eps, plus the 2 eps (t1 - t0) start/stop surcharge when
    the wave carries a variable displacement.
    """
    t = path.t_grid
    if t0 < t[0] - 1e-12 or t1 > t[-1] + 1e-12 or t1 <= t0:
        raise ParameterError("[t0, t1] must be an interval inside the path's time range")
    phi_t = spectral.differentiate_uniform(path.phi, path.dt, axis=0)
    phi_x = spectral.differentiate_uniform(path.phi, path.dx, axis=1)
    mask = (t >= t0 - 1e-12) & (t <= t1 + 1e-12)
    density = np.trapezoid(phi_t[mask] ** 2 * phi_x[mask], path.x_grid, axis=1)
    energy = float(np.trapezoid(density, t[mask]))
    eps = path.epsilon
    rate = 3.0 * eps / (1.0 - eps)
    variable = float(np.ptp(path.displacement)) > 1e-12
    if variable:
        rate += 2.0 * eps
    bound = (t1 - t0) * rate
    satisfied = energy <= bound * (1.0 + 1e-6)
    return WaveEnergyReport(energy, float(bound), bool(satisfied),
                            {"rate": rate, "variable_displacement": variable})


def short_path_to(g_displacement, support, epsilon: float, lam: float = None,
                  dx: float = None, dt: float = None, pad: float = None) -> DiffPath1D:
    """Compactly supported path from the identity to x + g(x) with O(eps) energy.

    The wave phi(t,x) = x + f_eps(t - lambda x - shift(x), g(x)) starts and
    stops by giving the compression wave the variable length g(x); the shift
    (1 - lambda)(max g - g(x)) is applied past the maximum of g, where g
    decreases, playing the start of the wave backwards.  Points outside the
    support of g never move.

    g_displacement is a callable; `support` = (a, b) must contain its support.
    Requires g >= 0 and g' > -1 (otherwise x + g(x) is not a diffeomorphism).
    """
    if epsilon <= 0 or epsilon >= 0.5:
        raise ParameterError(f"epsilon must lie in (0, 1/2), got {epsilon}")
    lam = 1.0 - epsilon if lam is None else lam
    if lam >= 1.0 or lam <= 0.0:
        raise InvalidWaveError(f"need 0 < lambda < 1, got {lam}")
    dx = epsilon / 8.0 if dx is None else dx
    if dx > epsilon / 8.0 + 1e-12:
        raise ParameterError(f"grid must resolve epsilon: dx <= epsilon/8, got {dx:.4g}")
    a, b = support
    pad = 1.0 + 4.0 * epsilon if pad is None else pad
    x = _uniform((a - pad, b + pad), dx)
    g = np.asarray(g_displacement(x), dtype=float)
    if np.abs(g[:4]).max() > 1e-12 or np.abs(g[-4:]).max() > 1e-12:
        raise DomainError("displacement is not supported inside the given interval")
    if g.min() < -1e-12:
        raise InvalidDisplacementError("forward compression waves need g >= 0")
    g_prime = spectral.differentiate_uniform(g, dx)
    if g_prime.min() <= -1.0 + 1e-6:
        raise InvalidDisplacementError(
            f"need g' > -1 for x + g(x) to be a diffeomorphism; min g' = {g_prime.min():.4f}")

    b_max = float(g.max())
    i_star = int(np.argmax(g))
    shift = np.zeros_like(x)
    shift[i_star:] = (1.0 - lam) * (b_max - g[i_star:])

    entry = lam * x + shift - epsilon
    exit_ = lam * x + shift + g + epsilon
    dt = dx if dt is None else dt
    t = _uniform((entry.min() - 4.0 * dt, exit_.max() + 4.0 * dt), dt)

    z = t[:, None] - (lam * x + shift)[None, :]
    phi = x[None, :] + _smoothed_ramp(z, g[None, :], epsilon, dx)
    return DiffPath1D(t, x, phi, lam, epsilon, g)


def invert_monotone(path: DiffPath1D, values: np.ndarray) -> np.ndarray:
    """Inverse of the path's final map, evaluated at `values`."""
    return np.interp(values, path.phi[-1], path.x_grid)


def path_lower_bound(path: DiffPath1D, rho, f_test, A: float = 1.0) -> BoundReport:
    """Displacement witness against the divergence-weighted path length.

    lhs: |integral rho . (f o psi_1) - integral rho . f| with psi_1 the
    composition of the start map with the inverse of the final map.  rhs:
    sup|f| * integral over t of sqrt(C_rho |u|^2 + C'_rho |div u|^2), with the
    Cauchy-Schwarz constants C_rho = 2 ||rho'||_2^2 and C'_rho = 2 ||rho||_2^2
    recorded in the report, alongside the plain and divergence-weighted path
    energies.  The lhs stays fixed for paths sharing endpoints, while the
    unweighted energy of compression waves collapses: the divergence term is
    what keeps the bound, and hence the weighted distance, positive.
    """
    x = path.x_grid
    rho_v = np.asarray(rho(x), dtype=float)
    f_v = np.asarray(f_test(x), dtype=float)
    for name, vals in (("rho", rho_v), ("f_test", f_v)):
        if np.abs(vals[:3]).max() > 1e-12 * max(np.abs(vals).max(), 1.0) or \
           np.abs(vals[-3:]).max() > 1e-12 * max(np.abs(vals).max(), 1.0):
            raise DomainError(f"{name} must be compactly supported inside the window")

    psi1 = np.interp(invert_monotone(path, x), x, path.phi[0])
    lhs = abs(np.trapezoid(rho_v * np.interp(psi1, x, f_v), x) - np.trapezoid(rho_v * f_v, x))

    phi_t = spectral.differentiate_uniform(path.phi, path.dt, axis=0)
    phi_x = spectral.differentiate_uniform(path.phi, path.dx, axis=1)
    phi_tx = spectral.differentiate_uniform(phi_t, path.dx, axis=1)
    u_sq = np.trapezoid(phi_t**2 * phi_x, x, axis=1)
    div_sq = np.trapezoid(phi_tx**2 / phi_x, x, axis=1)

    rho_prime = spectral.differentiate_uniform(rho_v, path.dx)
    c_rho = 2.0 * float(np.trapezoid(rho_prime**2, x))
    c_rho_div = 2.0 * float(np.trapezoid(rho_v**2, x))
    sup_f = float(np.abs(f_v).max())
    rhs = sup_f * float(np.trapezoid(np.sqrt(c_rho * u_sq + c_rho_div * div_sq), path.t_grid))

    details = {
        "C_rho": c_rho,
        "C_rho_div": c_rho_div,
        "sup_f": sup_f,
        "h0_energy": float(np.trapezoid(u_sq, path.t_grid)),
        "ga_energy": float(np.trapezoid(u_sq + A * div_sq, path.t_grid)),
        "ga_length": float(np.trapezoid(np.sqrt(u_sq + A * div_sq), path.t_grid)),
    }
    return make_report(lhs, rhs, details)
