"""The time-changed transition density p(t, z) and its oracles.

p(t, z) = E[q(E_t, z)] = int_0^inf q(s, z) h_t(s) ds, where h_t is the
density of the inverse subordinator E_t.  This is evaluated three
independent ways:

* quadrature against h_t (the workhorse; adaptive QUADPACK pieces split at
  the natural change-of-character points, or vectorized Gauss-Legendre
  panels for grid campaigns),
* Monte Carlo over inverse-subordinator samples,
* for stable subordinators and 1-d Gaussian/Cauchy kernels, the
  Fourier-Mittag-Leffler representation
      p(t, z) = (1/pi) int_0^inf cos(xi z) E_beta(-xi**alpha t**beta) dxi,
  which never touches the subordination path and serves as an oracle.

The module also carries the Mittag-Leffler evaluator E_beta(-x), a mass
conservation check, and the weak-form residual test for the fractional-
in-time evolution driven by the 1-d Laplacian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import DomainError, QuadratureError, UnsupportedModelError
from .numerics import DEFAULT_QUADRATURE, geometric_boundaries, panel_nodes
from .rng import RngStream
from .subordinator import SubordinatorModel


@dataclass(frozen=True)
class SolutionEstimate:
    """A value with its error scale and the method that produced it."""

    value: float
    error: float
    method: str
    converged: bool = True


def _split_points(kernel, model, t, z):
    """Where the integrand of p changes character: the kernel's own time
    scale at distance z and the inverse-subordinator time scale."""
    inv_phi = 1.0 / model.exponent.phi(1.0 / t)
    pts = {inv_phi, 2.0 * inv_phi}
    ts = kernel.time_scale(z)
    if ts > 0.0:
        pts.add(ts)
    return sorted(pts)


def _support(kernel, model, t, z):
    """(s_lo, s_hi) outside which the integrand has underflowed."""
    s_hi = model.inverse_support(t)
    scale = min(_split_points(kernel, model, t, z)[0], s_hi)
    return scale * 1e-18, s_hi


def _check_on_diagonal_integrable(kernel, model, t, z):
    """p(t, 0) is infinite when q(s, 0) blows up at least like 1/s at
    s -> 0 (the inverse-time density is positive there); refuse to return
    a roundoff-limited finite number for it."""
    if z != 0.0:
        return
    scale = model.inverse_support(t)
    s1, s2 = 1e-10 * scale, 1e-8 * scale
    q1, q2 = float(kernel.q(s1, 0.0)), float(kernel.q(s2, 0.0))
    if q1 <= 0.0 or q2 <= 0.0:
        return
    slope = math.log(q2 / q1) / math.log(s2 / s1)
    if slope <= -1.0 + 1e-9:
        raise DomainError(
            "the on-diagonal value diverges for this kernel (short-time "
            f"blow-up exponent {slope:.3f} <= -1)")


def density_quadrature(kernel, model, t, z, cfg=None, method="adaptive"):
    """p(t, z) by quadrature of q(s, z) against the density of E_t.

    method='adaptive' uses QUADPACK piecewise with split hints;
    method='panel' uses vectorized composite Gauss-Legendre panels, which
    is much faster inside nested integrals at slightly lower accuracy.
    """
    cfg = cfg or model.quadrature or DEFAULT_QUADRATURE
    if t <= 0.0 or z < 0.0:
        raise DomainError("density needs t > 0 and z >= 0")
    _check_on_diagonal_integrable(kernel, model, t, z)
    if method == "panel":
        return _density_panel(kernel, model, t, z)
    splits = _split_points(kernel, model, t, z)
    s_lo, s_hi = _support(kernel, model, t, z)

    def integrand(s):
        return float(kernel.q(s, z)) * model.inverse_density(t, s)

    # locate the integrand's peak to guide the subdivision
    try:
        scan = np.geomspace(max(s_lo, 1e-280), s_hi, 160)
        vals = np.asarray(kernel.q(scan, z)) * model.inverse_density_grid(t, scan)
        rel_tol = cfg.rel_tol
    except UnsupportedModelError:
        # finite-difference inverse densities amplify the distribution's
        # quadrature error by 1/step (~1e-5 relative); asking QUADPACK to
        # beat that floor only burns subdivisions
        scan = np.geomspace(max(s_lo, 1e-280), s_hi, 32)
        vals = np.array([integrand(s) for s in scan])
        rel_tol = max(cfg.rel_tol, 1e-5)
    s_star = float(scan[int(np.argmax(vals))])
    pts = sorted({p for p in (*splits, s_star / 8, s_star, 8 * s_star) if p < s_hi})

    total, err = 0.0, 0.0
    edges = [0.0, *pts, s_hi]
    ok = True
    for lo, hi in zip(edges[:-1], edges[1:]):
        v, e = integrate.quad(integrand, lo, hi, epsabs=cfg.abs_floor,
                              epsrel=rel_tol, limit=cfg.max_subdivisions)
        total, err = total + v, err + e
    tail, te = integrate.quad(integrand, s_hi, np.inf, epsabs=1e-280,
                              epsrel=rel_tol, limit=200)
    total, err = total + tail, err + te
    if total > 0 and err > max(1e-5, 100.0 * rel_tol) * total:
        ok = False
    return SolutionEstimate(total, err, "quad", ok)


def _density_panel(kernel, model, t, z):
    s_lo, s_hi = _support(kernel, model, t, z)
    splits = _split_points(kernel, model, t, z)
    bounds = geometric_boundaries(s_lo, s_hi, per_decade=4, extra=splits)
    nodes, weights = panel_nodes(bounds, order=12)
    qs = np.asarray(kernel.q(nodes, z), dtype=float)
    hs = model.inverse_density_grid(t, nodes)
    vals = qs * hs
    total = float(np.dot(weights, vals))
    return SolutionEstimate(total, abs(total) * 1e-8, "quad", True)


def density_monte_carlo(kernel, model, t, z, n, rng):
    """p(t, z) as the sample mean of q over inverse-subordinator draws."""
    if n < 100:
        raise DomainError(f"need at least 100 samples, got {n}")
    if isinstance(rng, (int, np.integer)):
        rng = RngStream(rng)
    e_samples = model.sample_inverse(t, rng, n)
    q_vals = np.asarray(kernel.q(e_samples, z), dtype=float)
    mean = float(q_vals.mean())
    stderr = float(q_vals.std(ddof=1) / math.sqrt(n))
    return SolutionEstimate(mean, stderr, "mc", True)


# --------------------------------------------------------------------------
# Mittag-Leffler E_beta(-x)
# --------------------------------------------------------------------------

_ML_SERIES_EDGE = 1.0
_ML_ASYMPTOTIC_EDGE = 50.0


def mittag_leffler(beta, x):
    """E_beta(-x) for beta in (0, 1), x >= 0.

    Power series for x <= 1, the completely monotone spectral
    representation for 1 < x < 50, and the alternating asymptotic series
    with minimal-term truncation for x >= 50.  The branches agree to
    ~1e-13 at both switchover points.
    """
    if not 0.0 < beta < 1.0:
        raise DomainError(f"order must lie in (0, 1), got {beta}")
    if x < 0.0:
        raise DomainError(f"argument must be >= 0, got {x}")
    if x == 0.0:
        return 1.0
    if x <= _ML_SERIES_EDGE:
        return _ml_series(beta, x)
    if x < _ML_ASYMPTOTIC_EDGE:
        return _ml_integral(beta, x)
    return _ml_asymptotic(beta, x)


def _ml_series(beta, x):
    total = 1.0
    for k in range(1, 400):
        term = (-x) ** k * special.rgamma(1.0 + beta * k)
        total += term
        if abs(term) < 1e-18 * abs(total) and k > 3:
            break
    return float(total)


def _ml_integral(beta, x):
    """E_beta(-x) = sin(b pi)/(b pi) int_0^inf e^{-(ux)^(1/b)}
    / (u^2 + 2u cos(b pi) + 1) du."""
    cb = math.cos(beta * math.pi)
    inv_b = 1.0 / beta

    def f(u):
        arg = (u * x) ** inv_b
        if arg > 700.0:
            return 0.0
        return math.exp(-arg) / (u * u + 2.0 * u * cb + 1.0)

    split = 1.0 / x
    total = 0.0
    for lo, hi in ((0.0, split), (split, np.inf)):
        v, _ = integrate.quad(f, lo, hi, epsabs=1e-15, epsrel=1e-13, limit=500)
        total += v
    return math.sin(beta * math.pi) / (beta * math.pi) * total


def _ml_asymptotic(beta, x):
    total = 0.0
    prev = np.inf
    for k in range(1, 120):
        term = (-1.0) ** (k + 1) * x ** (-k) * special.rgamma(1.0 - beta * k)
        if term == 0.0:
            continue
        if abs(term) > prev:
            break
        total += term
        prev = abs(term)
    return float(total)


# --------------------------------------------------------------------------
# Fourier oracle
# --------------------------------------------------------------------------

def density_fourier(beta, spatial_alpha, t, z, tol=1e-9):
    """p(t, z) = (1/pi) int_0^inf cos(xi z) E_beta(-xi**alpha t**beta) dxi.

    One-dimensional only; spatial_alpha selects the Gaussian (2) or Cauchy
    (1) spatial generator.  Oscillation beyond a few periods is handled by
    Filon-type panels (exact integration of a quadratic interpolant against
    cos), with the remainder past the last panel added in closed form from
    integration by parts.
    """
    if spatial_alpha not in (1, 2):
        raise DomainError("spatial order must be 1 or 2")
    if t <= 0.0 or z < 0.0:
        raise DomainError("oracle needs t > 0, z >= 0")
    if z == 0.0 and spatial_alpha == 1:
        raise DomainError("on-diagonal value diverges for spatial order 1")
    tb = t ** beta

    def f(xi):
        return mittag_leffler(beta, xi ** spatial_alpha * tb)

    xi_asym = (60.0 / tb) ** (1.0 / spatial_alpha)
    if z == 0.0:
        head, _ = integrate.quad(f, 0.0, xi_asym, epsabs=1e-13, epsrel=1e-11,
                                 limit=800)
        return (head + _fourier_flat_tail(beta, spatial_alpha, tb, xi_asym)) / math.pi

    xi_f = max(30.0 / z, 1e-6)
    head, _ = integrate.quad(lambda xi: f(xi) * math.cos(xi * z), 0.0, xi_f,
                             epsabs=1e-13, epsrel=1e-11, limit=1500)
    tail = _filon_tail(f, beta, spatial_alpha, tb, xi_f, z)
    return (head + tail) / math.pi


def _fourier_flat_tail(beta, alpha, tb, xi0):
    """int_{xi0}^inf E_beta(-xi^alpha tb) dxi by the asymptotic expansion."""
    total = 0.0
    prev = np.inf
    for k in range(1, 60):
        if alpha * k <= 1.0:
            raise QuadratureError("non-integrable oracle tail")
        term = ((-1.0) ** (k + 1) * tb ** (-k) * special.rgamma(1.0 - beta * k)
                * xi0 ** (1.0 - alpha * k) / (alpha * k - 1.0))
        if term == 0.0:
            continue
        if abs(term) > prev:
            break
        total += term
        prev = abs(term)
    return total


def _cos_sin_moments(big_h, z):
    """int_0^H u^m cos(zu) du and ...sin(zu) du for m = 0, 1, 2."""
    zh = z * big_h
    s, c = math.sin(zh), math.cos(zh)
    c0 = s / z
    s0 = (1.0 - c) / z
    c1 = (c - 1.0) / z ** 2 + big_h * s / z
    s1 = (s - zh * c) / z ** 2
    c2 = (2.0 * zh * c + (zh * zh - 2.0) * s) / z ** 3
    s2 = (2.0 * zh * s - (zh * zh - 2.0) * c - 2.0) / z ** 3
    return (c0, c1, c2), (s0, s1, s2)


def _filon_panel(f, a, b, z):
    """Exact integral of the quadratic through f(a), f(mid), f(b) times
    cos(z xi) over [a, b]; plain Simpson when the panel sees < 1e-3 rad."""
    h = 0.5 * (b - a)
    fa, fm, fb = f(a), f(a + h), f(b)
    if z * (b - a) < 1e-3:
        return (b - a) / 6.0 * (fa * math.cos(z * a)
                                + 4.0 * fm * math.cos(z * (a + h))
                                + fb * math.cos(z * b))
    c2 = (fb - 2.0 * fm + fa) / (2.0 * h * h)
    c1 = (fm - fa - c2 * h * h) / h
    c0 = fa
    (c0m, c1m, c2m), (s0m, s1m, s2m) = _cos_sin_moments(b - a, z)
    cos_part = c0 * c0m + c1 * c1m + c2 * c2m
    sin_part = c0 * s0m + c1 * s1m + c2 * s2m
    return math.cos(z * a) * cos_part - math.sin(z * a) * sin_part


def _ml_tail_derivs(beta, alpha, tb, xi):
    """f, f', f'', f''' of f(xi) = E_beta(-xi**alpha tb) from the
    asymptotic expansion (valid once xi**alpha * tb is large)."""
    derivs = np.zeros(4)
    prev = np.inf
    for k in range(1, 80):
        coef = (-1.0) ** (k + 1) * special.rgamma(1.0 - beta * k) * tb ** (-k)
        if coef == 0.0:
            continue
        base = coef * xi ** (-alpha * k)
        if abs(base) > prev:
            break
        prev = abs(base)
        fall = 1.0
        for j in range(4):
            derivs[j] += base * fall / xi ** j if j else base
            fall *= -(alpha * k + j)
    return derivs


def _filon_tail(f, beta, alpha, tb, xi0, z):
    """Filon panels from xi0 out to the asymptotic zone, closed by the
    four-term integration-by-parts remainder with analytic derivatives:
    int_a^inf f cos(z xi) dxi = -f s/z - f' c/z^2 + f'' s/z^3 + f''' c/z^4
    + O(f''''/z^4).  Panel widths stay below half an oscillation period
    and a small fraction of the running abscissa so the quadratic
    interpolant tracks the envelope."""
    xi_switch = max((30.0 / tb) ** (1.0 / alpha), 40.0 / z, xi0)
    total = 0.0
    a = xi0
    while a < xi_switch:
        width = min(math.pi / (2.0 * z), 0.05 * a) if a * z > 10 else math.pi / (2.0 * z)
        b = min(a + max(width, 1e-3 * a), xi_switch * 1.0000001)
        total += _filon_panel(f, a, b, z)
        a = b
    f0, f1, f2, f3 = _ml_tail_derivs(beta, alpha, tb, a)
    s, c = math.sin(z * a), math.cos(z * a)
    total += -f0 * s / z - f1 * c / z ** 2 + f2 * s / z ** 3 + f3 * c / z ** 4
    return total


# --------------------------------------------------------------------------
# Mass conservation
# --------------------------------------------------------------------------

def mass_residual(kernel, model, t, cfg=None):
    """|int_R p(t, |y|) dy - 1| for 1-d exact kernels."""
    if getattr(kernel, "dim", None) != 1:
        raise DomainError("mass check needs a 1-d exact kernel")
    length = kernel.length_scale(1.0 / model.exponent.phi(1.0 / t))

    def p_of_y(y):
        return _density_panel(kernel, model, t, y).value

    # the improper integral needs the interior scale resolved explicitly
    head, _ = integrate.quad(p_of_y, 0.0, 10.0 * length,
                             points=[0.1 * length, length],
                             epsabs=1e-12, epsrel=1e-10, limit=500)
    tail, _ = integrate.quad(p_of_y, 10.0 * length, np.inf,
                             epsabs=1e-12, epsrel=1e-10, limit=500)
    return abs(2.0 * (head + tail) - 1.0)


# --------------------------------------------------------------------------
# Weak-form residual for the fractional-in-time evolution
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class GaussianBump:
    """amplitude * exp(-((x - center)/width)**2); closed under heat flow."""

    center: float = 0.0
    width: float = 1.0
    amplitude: float = 1.0

    def __call__(self, x):
        u = (np.asarray(x, dtype=float) - self.center) / self.width
        return (self.amplitude * np.exp(-u * u))[()]

    def second_derivative(self, x):
        u = np.asarray(x, dtype=float) - self.center
        w2 = self.width ** 2
        return (self.amplitude * np.exp(-u * u / w2)
                * (4.0 * u * u / w2 ** 2 - 2.0 / w2))[()]

    def heat_evolution(self, r, x):
        """exp(r d^2/dx^2) applied to the bump (broadcasts r against x)."""
        r = np.asarray(r, dtype=float)
        x = np.asarray(x, dtype=float)
        w2 = self.width ** 2 + 4.0 * r
        u = x - self.center
        return (self.amplitude * self.width / np.sqrt(w2)
                * np.exp(-u * u / w2))[()]


@dataclass(frozen=True)
class WeakFormReport:
    residual: float            # max over t of |LHS - RHS| / max(|RHS|, floor)
    rows: tuple                # (t, lhs, rhs) triples
    richardson_warning: bool   # finite-difference step not yet converged
    initial_error: float       # max |u(0+, x) - f(x)| on the grid


def _evolved(model, s, bump, x_grid):
    """u(s, x) = E[T_{E_s} f] on the grid, via the inverse-time density."""
    if s <= 0.0:
        return bump(x_grid)
    r_hi = model.inverse_support(s)
    bounds = geometric_boundaries(r_hi * 1e-16, r_hi, per_decade=4)
    nodes, weights = panel_nodes(bounds, order=12)
    h = model.inverse_density_grid(s, nodes)
    profiles = bump.heat_evolution(nodes[:, None], x_grid[None, :])
    return (weights * h) @ profiles


def caputo_weak_residual(beta, f, g, t_grid, x_grid, fd_step=1e-3):
    """Residual of the weak-form identity
        d/dt int g(x) I_t^w u(., x) dx = int u(t, x) g''(x) dx
    where I_t^w u = int_0^t w(t-s)(u(s,.) - f) ds with the fractional kernel
    w(s) = s**(-beta)/Gamma(1-beta), u the time-changed heat evolution of
    f, and the spatial generator the 1-d Laplacian.

    The endpoint singularity of w is removed exactly by the substitution
    s = t(1 - v**(1/(1-beta))); the time derivative is a central difference
    with a step-halving consistency check (Richardson flag).
    """
    if not 0.0 < beta < 1.0:
        raise DomainError(f"order must lie in (0, 1), got {beta}")
    from .bernstein import Stable
    model = SubordinatorModel(Stable(beta))
    x_grid = np.asarray(x_grid, dtype=float)
    t_grid = np.asarray(t_grid, dtype=float)
    f_vals = f(x_grid)
    g_vals = g(x_grid)
    g2_vals = g.second_derivative(x_grid)

    def x_integral(values):
        return integrate.simpson(values, x=x_grid)

    gl_nodes, gl_weights = np.polynomial.legendre.leggauss(32)
    v_nodes = 0.5 * (gl_nodes + 1.0)
    v_weights = 0.5 * gl_weights
    pref_const = 1.0 / ((1.0 - beta) * math.gamma(1.0 - beta))

    def memory_integral(t):
        """int g(x) I_t^w(u(., x)) dx after the singularity substitution."""
        s_vals = t * (1.0 - v_nodes ** (1.0 / (1.0 - beta)))
        inner = np.empty_like(s_vals)
        for i, s in enumerate(s_vals):
            inner[i] = x_integral(g_vals * (_evolved(model, s, f, x_grid) - f_vals))
        return t ** (1.0 - beta) * pref_const * float(np.dot(v_weights, inner))

    rows = []
    warn = False
    max_res = 0.0
    for t in t_grid:
        d = fd_step * t
        lhs = (memory_integral(t + d) - memory_integral(t - d)) / (2.0 * d)
        lhs_half = (memory_integral(t + d / 2) - memory_integral(t - d / 2)) / d
        if abs(lhs - lhs_half) > 0.1 * max(abs(lhs_half), 1e-12):
            warn = True
        rhs = x_integral(_evolved(model, t, f, x_grid) * g2_vals)
        rows.append((float(t), float(lhs_half), float(rhs)))
        max_res = max(max_res, abs(lhs_half - rhs) / max(abs(rhs), 1e-8))

    u0 = _evolved(model, 1e-16 * float(t_grid.min()), f, x_grid)
    initial_error = float(np.max(np.abs(u0 - f_vals)))
    return WeakFormReport(float(max_res), tuple(rows), warn, initial_error)
