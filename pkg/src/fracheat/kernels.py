"""Spatial heat-kernel models q(t, z), z = distance between the two points.

Exact kernels (Gaussian and Cauchy in d dimensions) serve as ground truth
where closed forms exist.  The two surrogate kernels realize the canonical
two-sided estimate shapes for jump-type and diffusion-type processes on a
space with volume profile V and space-time scale Phi:

    jump:      qbar(t, z) = t / (t V(Phi^-1(t)) + Phi(z) V(z))
    diffusion: qbar(t, z) = exp(-m(t, z)) / V(Phi^-1(t)),

with m the sub-Gaussian chaining exponent solving t/m = Phi(z/m).

All kernels are radially symmetric, immutable and vectorized over t or z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .scale import subgaussian_exponent


class SpatialKernel:
    """Base: q(t, z) >= 0, non-increasing in z for fixed t."""

    def q(self, t, z):
        raise NotImplementedError

    def time_scale(self, z):
        """Characteristic diffusion time to distance z (for split points)."""
        raise NotImplementedError

    def length_scale(self, s):
        """Characteristic distance reached in time s (inverse of the above)."""
        raise NotImplementedError


@dataclass(frozen=True)
class ExactGaussian(SpatialKernel):
    """(4 pi t)**(-d/2) * exp(-z**2 / (4t))."""

    dim: int = 1

    def q(self, t, z):
        t = np.asarray(t, dtype=float)
        z = np.asarray(z, dtype=float)
        return ((4.0 * np.pi * t) ** (-self.dim / 2.0)
                * np.exp(-z * z / (4.0 * t)))[()]

    def time_scale(self, z):
        return float(z) ** 2

    def length_scale(self, s):
        return math.sqrt(s)


@dataclass(frozen=True)
class ExactCauchy(SpatialKernel):
    """Gamma((d+1)/2) / pi**((d+1)/2) * t / (t**2 + z**2)**((d+1)/2)."""

    dim: int = 1

    def q(self, t, z):
        t = np.asarray(t, dtype=float)
        z = np.asarray(z, dtype=float)
        d = self.dim
        const = math.gamma((d + 1) / 2.0) / np.pi ** ((d + 1) / 2.0)
        return (const * t / (t * t + z * z) ** ((d + 1) / 2.0))[()]

    def time_scale(self, z):
        return float(z)

    def length_scale(self, s):
        return float(s)


@dataclass(frozen=True)
class JumpSurrogate(SpatialKernel):
    """Two-sided jump estimate shape t / (t V(Phi^-1(t)) + Phi(z) V(z))."""

    volume: object
    scale: object

    def q(self, t, z):
        t = np.asarray(t, dtype=float)
        z = np.asarray(z, dtype=float)
        near = t * self.volume.value(self.scale.inverse(t))
        far = self.scale.value(z) * self.volume.value(z)
        return (t / (near + far))[()]

    def time_scale(self, z):
        return float(self.scale.value(z))

    def length_scale(self, s):
        return float(self.scale.inverse(s))


@dataclass(frozen=True)
class DiffusionSurrogate(SpatialKernel):
    """Sub-Gaussian estimate shape exp(-m(t, z)) / V(Phi^-1(t))."""

    volume: object
    scale: object

    def __post_init__(self):
        if self.scale.exponent_lo <= 1.0:
            raise DomainError(
                "diffusion surrogate needs a scale index > 1, "
                f"got {self.scale.exponent_lo}")

    def q(self, t, z):
        t = np.asarray(t, dtype=float)
        z = np.asarray(z, dtype=float)
        front = 1.0 / self.volume.value(self.scale.inverse(t))
        if np.ndim(z) == 0 and float(z) == 0.0:
            return (front * np.ones_like(t))[()]
        m = subgaussian_exponent(self.scale, t, np.maximum(z, 1e-300))
        m = np.where(np.asarray(z) > 0, m, 0.0)
        return (front * np.exp(-m))[()]

    def time_scale(self, z):
        return float(self.scale.value(z))

    def length_scale(self, s):
        return float(self.scale.inverse(s))


def parse_kernel(key, volume=None, scale=None):
    """Parse 'gaussian:1', 'cauchy:1', 'jump' or 'diffusion' config values."""
    kind, _, rest = key.partition(":")
    kind = kind.strip().lower()
    if kind == "gaussian":
        return ExactGaussian(int(rest or 1))
    if kind == "cauchy":
        return ExactCauchy(int(rest or 1))
    if kind == "jump":
        return JumpSurrogate(volume, scale)
    if kind == "diffusion":
        return DiffusionSurrogate(volume, scale)
    raise DomainError(f"unknown kernel spec {key!r}")


@dataclass(frozen=True)
class DerivativeReport:
    """Empirical structure of d/dt qbar over a (t, z) grid.

    c_bound is the fitted constant in |d_t qbar| <= c_bound * env / t,
    where env is qbar itself for the jump surrogate and the relaxed
    envelope exp(-m/2) / V(Phi^-1(t)) for the diffusion surrogate (the
    ratio against qbar itself grows like m, so a relaxed exponent is the
    correct uniform bound there).  threshold_lo and threshold_hi are the
    observed sign-change thresholds in s = Phi(z)/t: the derivative is
    negative whenever s <= threshold_lo and positive whenever
    s >= threshold_hi on the grid.
    """

    c_bound: float
    threshold_lo: float
    threshold_hi: float
    passed: bool


def _dq_dt(kernel, t, z, rel_step=1e-5):
    """Central difference in t with one Richardson refinement if needed."""
    h = t * rel_step
    d1 = (kernel.q(t + h, z) - kernel.q(t - h, z)) / (2.0 * h)
    d2 = (kernel.q(t + h / 2, z) - kernel.q(t - h / 2, z)) / h
    if abs(d1 - d2) > 1e-3 * max(abs(d2), 1e-300):
        return (4.0 * d2 - d1) / 3.0
    return d2


def time_derivative_report(kernel, ts=None, zs=None):
    """Verify the derivative structure of a surrogate kernel on a grid."""
    if not isinstance(kernel, (JumpSurrogate, DiffusionSurrogate)):
        raise DomainError("derivative report applies to surrogate kernels")
    if ts is None:
        ts = np.geomspace(1e-2, 1e2, 9)
    if zs is None:
        zs = np.geomspace(1e-3, 1e3, 41)
    rows = []
    c_bound = 0.0
    for t in ts:
        for z in zs:
            qv = kernel.q(t, z)
            if qv < 1e-250:
                continue  # underflowed: neither sign nor ratio is meaningful
            s = kernel.scale.value(z) / t
            d = _dq_dt(kernel, t, z)
            if isinstance(kernel, DiffusionSurrogate):
                front = 1.0 / kernel.volume.value(kernel.scale.inverse(t))
                envelope = math.sqrt(qv * front)  # front * exp(-m/2)
            else:
                envelope = qv
            c_bound = max(c_bound, abs(d) * t / envelope)
            rows.append((s, d))
    rows.sort(key=lambda item: item[0])
    svals = np.array([s for s, _ in rows])
    signs = np.array([np.sign(d) for _, d in rows])
    nonneg = np.nonzero(signs >= 0)[0]
    threshold_lo = svals[nonneg[0] - 1] if nonneg.size and nonneg[0] > 0 else (
        svals[-1] if not nonneg.size else 0.0)
    nonpos = np.nonzero(signs <= 0)[0]
    threshold_hi = svals[nonpos[-1] + 1] if nonpos.size and nonpos[-1] + 1 < svals.size else (
        svals[0] if not nonpos.size else np.inf)
    passed = bool(0.0 < threshold_lo <= threshold_hi < np.inf
                  and np.isfinite(c_bound) and c_bound > 0.0)
    return DerivativeReport(float(c_bound), float(threshold_lo),
                            float(threshold_hi), passed)
