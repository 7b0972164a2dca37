"""Radial test functions f(x) = F(||x||) on R_+^dim.

The registry is closed: every kind is a piecewise power law, possibly times
an exponential, so the convergence of any integral

    integral_0^inf r^c F(r)^power dr

is decided from exponents alone (``moment_converges``) and has a closed form
(``power_moment``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import ParameterError

__all__ = [
    "RadialProfile",
    "TruncatedPower",
    "DoublePower",
    "ExpPower",
    "EpsFamilyF",
    "EpsFamilyG",
    "Zero",
]


class RadialProfile:
    """Common interface of the profile kinds.

    Attributes every kind provides:

    ``lower``            support start (0 or a positive cut)
    ``exponent_at_zero`` power-law exponent of F as r -> 0 (if lower == 0)
    ``exponent_at_inf``  power-law exponent of F as r -> inf
    ``decay_rate``       exponential decay rate at infinity (0 if none)
    ``breakpoints``      kinks and jumps
    """

    dim: int
    norm_param: float
    amplitude: float
    lower: float = 0.0
    exponent_at_zero: float = 0.0
    exponent_at_inf: float = 0.0
    decay_rate: float = 0.0
    breakpoints: tuple = ()
    strictly_positive: bool = True
    kind: str = "profile"

    def __call__(self, r):
        raise NotImplementedError

    def power_moment(self, c: float, power: float) -> float:
        """Closed form of the integral of r^c F(r)^power over (0, inf); inf if divergent."""
        raise NotImplementedError

    def dilated(self, factor: float) -> "RadialProfile":
        """The profile r -> F(r / factor)."""
        raise NotImplementedError

    def scaled(self, factor: float) -> "RadialProfile":
        return replace(self, amplitude=self.amplitude * factor)

    def is_zero(self) -> bool:
        return self.amplitude == 0

    def moment_converges(self, c: float, power: float) -> bool:
        """Whether the integral of r^c F(r)^power over (0, inf) is finite."""
        if self.is_zero():
            return power > 0
        if self.lower > 0:
            if power < 0:
                return False
        elif not c + self.exponent_at_zero * power > -1:
            return False
        if self.decay_rate > 0:
            return power > 0
        return c + self.exponent_at_inf * power < -1

    def describe(self) -> dict:
        out = {"kind": self.kind}
        out.update({k: v for k, v in self.__dict__.items()})
        return out


def _power_piece(lo: float, hi: float, e: float) -> float:
    """Integral of r^e over [lo, hi] with hi possibly infinite."""
    if math.isinf(hi):
        if e >= -1:
            return math.inf
        return lo ** (e + 1.0) / -(e + 1.0)
    if lo == 0:
        if e <= -1:
            return math.inf
        return hi ** (e + 1.0) / (e + 1.0)
    if e == -1:
        return math.log(hi / lo)
    return (hi ** (e + 1.0) - lo ** (e + 1.0)) / (e + 1.0)


@dataclass(frozen=True)
class TruncatedPower(RadialProfile):
    """amplitude * r^exponent on [cut, inf), zero below the cut."""

    exponent: float
    cut: float = 1.0
    dim: int = 1
    norm_param: float = 1.0
    amplitude: float = 1.0

    kind = "TruncatedPower"
    strictly_positive = False

    def __post_init__(self):
        if not self.cut > 0:
            raise ParameterError("TruncatedPower needs a positive cut")

    @property
    def lower(self):
        return self.cut

    @property
    def exponent_at_inf(self):
        return self.exponent

    @property
    def exponent_at_zero(self):
        return self.exponent

    @property
    def breakpoints(self):
        return (self.cut,)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore", over="ignore"):
            out = np.where(r >= self.cut, self.amplitude * np.power(np.maximum(r, self.cut), self.exponent), 0.0)
        return float(out) if out.ndim == 0 else out

    def power_moment(self, c, power):
        if not self.moment_converges(c, power):
            return math.inf
        if self.is_zero():
            return 0.0
        return self.amplitude ** power * _power_piece(self.cut, math.inf, c + self.exponent * power)

    def dilated(self, factor):
        return replace(self, cut=self.cut * factor, amplitude=self.amplitude * factor ** -self.exponent)


@dataclass(frozen=True)
class DoublePower(RadialProfile):
    """amplitude * (r/knee)^a_inner below the knee, amplitude * (r/knee)^a_outer above.

    Continuous and strictly positive on (0, inf).
    """

    a_inner: float
    a_outer: float
    knee: float = 1.0
    dim: int = 1
    norm_param: float = 1.0
    amplitude: float = 1.0

    kind = "DoublePower"

    def __post_init__(self):
        if not self.knee > 0:
            raise ParameterError("DoublePower needs a positive knee")

    @property
    def exponent_at_zero(self):
        return self.a_inner

    @property
    def exponent_at_inf(self):
        return self.a_outer

    @property
    def breakpoints(self):
        return (self.knee,)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        u = r / self.knee
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            out = self.amplitude * np.where(u < 1.0, np.power(u, self.a_inner), np.power(u, self.a_outer))
        return float(out) if out.ndim == 0 else out

    def power_moment(self, c, power):
        if not self.moment_converges(c, power):
            return math.inf
        if self.is_zero():
            return 0.0
        inner = _power_piece(0.0, 1.0, c + self.a_inner * power)
        outer = _power_piece(1.0, math.inf, c + self.a_outer * power)
        return self.amplitude ** power * self.knee ** (c + 1.0) * (inner + outer)

    def dilated(self, factor):
        return replace(self, knee=self.knee * factor)


@dataclass(frozen=True)
class ExpPower(RadialProfile):
    """amplitude * r^a * exp(-rate r), strictly positive on (0, inf)."""

    a: float
    rate: float = 1.0
    dim: int = 1
    norm_param: float = 1.0
    amplitude: float = 1.0

    kind = "ExpPower"

    def __post_init__(self):
        if not self.rate > 0:
            raise ParameterError("ExpPower needs a positive rate")

    @property
    def exponent_at_zero(self):
        return self.a

    @property
    def exponent_at_inf(self):
        return self.a

    @property
    def decay_rate(self):
        return self.rate

    @property
    def breakpoints(self):
        # not a kink: the mode, as a scale anchor for the quadrature
        return (self.a / self.rate,) if self.a > 0 else ()

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore", over="ignore", under="ignore"):
            out = self.amplitude * np.power(r, self.a) * np.exp(-self.rate * r)
        return float(out) if out.ndim == 0 else out

    def power_moment(self, c, power):
        if not self.moment_converges(c, power):
            return math.inf
        if self.is_zero():
            return 0.0
        e = c + self.a * power
        lam = self.rate * power
        # log space: Gamma(e+1) and lam^(e+1) overflow separately for large a
        log_m = power * math.log(abs(self.amplitude)) + math.lgamma(e + 1.0) - (e + 1.0) * math.log(lam)
        return math.exp(log_m) if log_m < 709.0 else math.inf

    def dilated(self, factor):
        return replace(self, rate=self.rate / factor, amplitude=self.amplitude * factor ** -self.a)


class _EpsFamily(TruncatedPower):
    """A TruncatedPower built from (sigma, eps, exponent parameter)."""

    def dilated(self, factor):
        return TruncatedPower(self.exponent, self.cut * factor, self.dim, self.norm_param,
                              self.amplitude * factor ** -self.exponent)

    def scaled(self, factor):
        return TruncatedPower(self.exponent, self.cut, self.dim, self.norm_param, self.amplitude * factor)


def EpsFamilyF(sigma: float, eps: float, p: float, dim: int = 1, norm_param: float = 1.0) -> TruncatedPower:
    """The extremal test function ||x||^(sigma - eps/p - dim) on ||x|| >= 1.

    Requires 0 < eps < p (sigma - 1).
    """
    if not 0 < eps < p * (sigma - 1):
        raise ParameterError(f"eps must lie in (0, p(sigma-1)) = (0, {p * (sigma - 1)!r}), got {eps!r}")
    prof = _EpsF(sigma - eps / p - dim, 1.0, dim, norm_param)
    object.__setattr__(prof, "family", {"sigma": sigma, "eps": eps, "p": p})
    return prof


def EpsFamilyG(sigma: float, eps: float, q: float, dim: int = 1, norm_param: float = 1.0) -> TruncatedPower:
    """The extremal test function ||y||^(-sigma - eps/q - dim) on ||y|| >= 1."""
    if not eps > 0:
        raise ParameterError(f"eps must be positive, got {eps!r}")
    prof = _EpsG(-sigma - eps / q - dim, 1.0, dim, norm_param)
    object.__setattr__(prof, "family", {"sigma": sigma, "eps": eps, "q": q})
    return prof


class _EpsF(_EpsFamily):
    kind = "EpsFamilyF"


class _EpsG(_EpsFamily):
    kind = "EpsFamilyG"


@dataclass(frozen=True)
class Zero(RadialProfile):
    """The zero function (vanishes on a set of full measure)."""

    dim: int = 1
    norm_param: float = 1.0
    amplitude: float = 0.0

    kind = "Zero"
    strictly_positive = False

    def __call__(self, r):
        out = np.zeros_like(np.asarray(r, dtype=float))
        return float(out) if out.ndim == 0 else out

    def power_moment(self, c, power):
        return 0.0 if power > 0 else math.inf

    def dilated(self, factor):
        return self

    def is_zero(self):
        return True
