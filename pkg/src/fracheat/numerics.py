"""Shared numerical utilities: root bracketing, panel quadrature, config.

All root targets in this package are monotone on (0, inf), so the solver
strategy is geometric bracket expansion (factor 2) from a starting guess
followed by a safeguarded bracketing refinement.  Panel quadrature builds
composite Gauss-Legendre rules on geometric subdivisions; it is used where
an integrand must be evaluated vectorized for speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import optimize

from .errors import BracketError


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances shared by the adaptive quadratures."""

    rel_tol: float = 1e-10
    abs_floor: float = 1e-300
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not 0.0 < self.rel_tol < 1.0:
            raise ValueError(f"rel_tol must be in (0, 1), got {self.rel_tol}")
        if self.max_subdivisions < 10:
            raise ValueError("max_subdivisions must be >= 10")


DEFAULT_QUADRATURE = QuadratureConfig()

_BRACKET_LO = 1e-300
_BRACKET_HI = 1e300


def expand_bracket(f, x0=1.0, factor=2.0):
    """Expand geometrically from x0 until f changes sign.

    Works for monotone f of either direction.  Returns (a, b) with
    f(a) * f(b) <= 0.  Raises BracketError if no sign change is found
    inside [1e-300, 1e300].
    """
    fx0 = f(x0)
    if fx0 == 0.0:
        return x0, x0
    lo = hi = x0
    prev_lo = prev_hi = x0
    while True:
        moved = False
        if lo > _BRACKET_LO:
            prev_lo, lo = lo, max(lo / factor, _BRACKET_LO)
            flo = f(lo)
            moved = True
            if flo == 0.0:
                return lo, lo
            if np.sign(flo) != np.sign(fx0):
                return lo, prev_lo
        if hi < _BRACKET_HI:
            prev_hi, hi = hi, min(hi * factor, _BRACKET_HI)
            fhi = f(hi)
            moved = True
            if fhi == 0.0:
                return hi, hi
            if np.sign(fhi) != np.sign(fx0):
                return prev_hi, hi
        if not moved:
            raise BracketError(
                f"no sign change of target function inside [{_BRACKET_LO}, {_BRACKET_HI}]"
            )


def monotone_root(f, x0=1.0, rtol=1e-13):
    """Root of a monotone function via bracket expansion + Brent refinement."""
    a, b = expand_bracket(f, x0)
    if a == b:
        return a
    return optimize.brentq(f, a, b, rtol=max(rtol, 4.5e-16), xtol=1e-300)


@lru_cache(maxsize=64)
def _gl_rule(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def panel_nodes(boundaries, order=16):
    """Gauss-Legendre nodes/weights on consecutive [b_i, b_{i+1}] panels."""
    b = np.asarray(boundaries, dtype=float)
    x, w = _gl_rule(order)
    mid = 0.5 * (b[1:] + b[:-1])
    half = 0.5 * (b[1:] - b[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def geometric_boundaries(lo, hi, per_decade=4, extra=()):
    """Log-spaced panel boundaries from lo to hi with optional knots merged in."""
    if not (0.0 < lo < hi):
        raise ValueError(f"need 0 < lo < hi, got ({lo}, {hi})")
    n = max(2, int(np.ceil(per_decade * np.log10(hi / lo))) + 1)
    b = np.geomspace(lo, hi, n)
    if extra:
        pts = [p for p in extra if lo < p < hi]
        if pts:
            b = np.unique(np.concatenate([b, np.asarray(pts, dtype=float)]))
    return b


