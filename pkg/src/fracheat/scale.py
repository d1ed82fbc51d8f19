"""Space-time scale and volume profiles, and the implicit scale solvers.

Both the space-time scale Phi and the volume profile V are strictly
increasing functions vanishing at 0 with power-type weak scaling.  A single
pair of profile classes serves both roles; only the interpretation of the
exponents differs.  Spatial homogeneity is assumed throughout: the volume
of a ball depends on its radius only.

Two implicit equations recur in off-diagonal kernel shapes and are solved
here:

* ``subgaussian_exponent``: the unique m > 0 with t/m = Phi(r/m), the
  chaining exponent of sub-Gaussian bounds.  Closed form
  m = (r**a / t)**(1/(a-1)) for a pure power law Phi(r) = r**a.

* ``subordinated_exponent``: the unique n > 0 with
  1/phi(n/t) = Phi(r/n), its analogue after time change by an inverse
  subordinator.  Closed form n = (r * t**(-b/a))**(a/(a-b)) for
  Phi = r**a and phi = lam**b.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .numerics import monotone_root


@dataclass(frozen=True)
class PowerLaw:
    """profile(r) = r**exponent."""

    exponent: float

    def __post_init__(self):
        if not self.exponent > 0.0:
            raise DomainError(f"exponent must be positive, got {self.exponent}")

    @property
    def exponent_lo(self):
        return self.exponent

    @property
    def exponent_hi(self):
        return self.exponent

    def value(self, r):
        r = np.asarray(r, dtype=float)
        if np.min(r) < 0.0:
            raise DomainError("profile argument must be >= 0")
        return (r ** self.exponent)[()]

    def inverse(self, t):
        t = np.asarray(t, dtype=float)
        if np.min(t) < 0.0:
            raise DomainError("profile inverse argument must be >= 0")
        return (t ** (1.0 / self.exponent))[()]


@dataclass(frozen=True)
class PiecewisePower:
    """Two power branches glued continuously at r_break.

    profile(r) = r**exp_low for r <= r_break and
    r_break**(exp_low - exp_high) * r**exp_high beyond, so both branches
    agree at the break and bracketing solvers see a continuous function.
    """

    exp_low: float
    exp_high: float
    r_break: float

    def __post_init__(self):
        for name in ("exp_low", "exp_high", "r_break"):
            if not getattr(self, name) > 0.0:
                raise DomainError(f"{name} must be positive")

    @property
    def exponent_lo(self):
        return min(self.exp_low, self.exp_high)

    @property
    def exponent_hi(self):
        return max(self.exp_low, self.exp_high)

    @property
    def _coef_high(self):
        return self.r_break ** (self.exp_low - self.exp_high)

    def value(self, r):
        r = np.asarray(r, dtype=float)
        if np.min(r) < 0.0:
            raise DomainError("profile argument must be >= 0")
        with np.errstate(invalid="ignore"):
            out = np.where(r <= self.r_break,
                           r ** self.exp_low,
                           self._coef_high * r ** self.exp_high)
        return out[()]

    def inverse(self, t):
        t = np.asarray(t, dtype=float)
        if np.min(t) < 0.0:
            raise DomainError("profile inverse argument must be >= 0")
        t_break = self.r_break ** self.exp_low
        with np.errstate(invalid="ignore"):
            out = np.where(t <= t_break,
                           t ** (1.0 / self.exp_low),
                           (t / self._coef_high) ** (1.0 / self.exp_high))
        return out[()]


def parse_profile(key):
    """Parse 'power:2' or 'power2:2,3,1.0' (low exp, high exp, break)."""
    kind, _, rest = key.partition(":")
    kind = kind.strip().lower()
    if kind == "power":
        return PowerLaw(float(rest))
    if kind == "power2":
        lo, hi, brk = (float(v) for v in rest.split(","))
        return PiecewisePower(lo, hi, brk)
    raise DomainError(f"unknown profile spec {key!r}")


def subgaussian_exponent(scale, t, r):
    """Unique m > 0 with t/m = Phi(r/m); needs lower index > 1.

    Non-increasing in t for fixed r, and equal to 1 at t = Phi(r) for pure
    power laws.  Vectorized over t for power-law scales.
    """
    if scale.exponent_lo <= 1.0:
        raise DomainError(
            f"sub-Gaussian exponent needs scale index > 1, got {scale.exponent_lo}")
    if np.min(t) <= 0.0 or np.min(r) <= 0.0:
        raise DomainError("sub-Gaussian exponent needs t, r > 0")
    if isinstance(scale, PowerLaw):
        a = scale.exponent
        return ((np.asarray(r) ** a / np.asarray(t)) ** (1.0 / (a - 1.0)))[()]

    def balance(m):
        # log[(t/m) / Phi(r/m)], strictly increasing in m
        return np.log(t / m) - np.log(scale.value(r / m))

    guess = (r ** scale.exponent_hi / t) ** (1.0 / (scale.exponent_hi - 1.0))
    return monotone_root(balance, x0=float(guess))


def subordinated_exponent(scale, exponent, t, r):
    """Unique n > 0 with 1/phi(n/t) = Phi(r/n); needs alpha_lo > beta_hi.

    Phi(r/n) * phi(n/t) is strictly decreasing in n under the index
    condition, so the root of its log is bracketed and bisected.
    """
    if scale.exponent_lo <= exponent.beta_hi:
        raise DomainError(
            f"subordinated exponent needs scale index {scale.exponent_lo} "
            f"> subordinator index {exponent.beta_hi}")
    if np.min(t) <= 0.0 or np.min(r) <= 0.0:
        raise DomainError("subordinated exponent needs t, r > 0")
    from .bernstein import Stable  # local import keeps module deps one-way

    if isinstance(scale, PowerLaw) and isinstance(exponent, Stable):
        a, b = scale.exponent, exponent.beta
        return ((np.asarray(r) * np.asarray(t) ** (-b / a)) ** (a / (a - b)))[()]

    def balance(n):
        return np.log(scale.value(r / n)) + np.log(exponent.phi(n / t))

    a, b = scale.exponent_hi, exponent.beta_hi
    guess = (r * t ** (-b / a)) ** (a / (a - b))
    return monotone_root(balance, x0=float(guess))
