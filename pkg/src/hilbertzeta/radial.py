"""Integrals of radial functions of ||x||_gamma over the positive orthant.

``reduce_radial`` applies the exact reduction

    integral over R_+^s of F(||x||_gamma) dx = C(s, gamma) * integral_0^inf F(r) r^(s-1) dr

``mc_oracle`` estimates the same s-dimensional integral by importance
sampling in R_+^s.  It never uses C(s, gamma): its proposal density is a
scale mixture of product densities whose normalisation only involves
one-dimensional Gamma integrals.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DomainError, InsufficientDecayError
from .quad import QuadConfig, QuadResult, integrate_finite, integrate_semi_infinite
from .specfun import surface_constant

__all__ = [
    "SupportHint",
    "RadialIntegrand",
    "reduce_radial",
    "mc_oracle",
    "divergence_witness",
    "WitnessResult",
    "lp_norm",
]


class SupportHint(str, enum.Enum):
    FULL = "full"
    UNIT_BALL_EXTERIOR = "unit_ball_exterior"
    UNIT_BALL_INTERIOR = "unit_ball_interior"


_DEFAULT_BOUNDS = {
    SupportHint.FULL: (0.0, math.inf),
    SupportHint.UNIT_BALL_EXTERIOR: (1.0, math.inf),
    SupportHint.UNIT_BALL_INTERIOR: (0.0, 1.0),
}


@dataclass(frozen=True)
class RadialIntegrand:
    """A function F(||x||_gamma) on R_+^s, described by its profile F.

    ``profile`` takes and returns numpy arrays.  The quadrature hints refer
    to the one-dimensional integrand F(r) r^(s-1):

    * ``left_exponent`` -- its power-law exponent at the lower bound,
    * ``decay_rate`` / ``tail_exponent`` -- exponential rate or power
      ``r^(-1-tail_exponent)`` of its decay at infinity,
    * ``breakpoints`` -- kinks or jumps of F.

    ``bounds`` overrides the interval implied by ``support_hint``.
    """

    s: int
    gamma_param: float
    profile: Callable[[np.ndarray], np.ndarray]
    support_hint: SupportHint = SupportHint.FULL
    bounds: Optional[tuple[float, float]] = None
    left_exponent: Optional[float] = None
    decay_rate: Optional[float] = None
    tail_exponent: Optional[float] = None
    breakpoints: Sequence[float] = field(default_factory=tuple)

    def __post_init__(self):
        if int(self.s) != self.s or self.s < 1:
            raise DomainError(f"s must be a positive integer, got {self.s!r}")
        if not self.gamma_param > 0:
            raise DomainError("gamma_param must be positive")
        object.__setattr__(self, "support_hint", SupportHint(self.support_hint))

    @property
    def interval(self) -> tuple[float, float]:
        return self.bounds if self.bounds is not None else _DEFAULT_BOUNDS[self.support_hint]

    def restricted(self, lo: float, hi: float) -> "RadialIntegrand":
        """The same integrand with its radial support cut to [lo, hi]."""
        a, b = self.interval
        return RadialIntegrand(
            self.s,
            self.gamma_param,
            self.profile,
            self.support_hint,
            (max(a, lo), min(b, hi)),
            self.left_exponent if lo <= a else None,
            self.decay_rate,
            self.tail_exponent,
            tuple(self.breakpoints),
        )

    def __call__(self, x: np.ndarray) -> np.ndarray:
        """Evaluate F(||x||_gamma) on points of shape (N, s), zero off the support."""
        r = lp_norm(x, self.gamma_param)
        lo, hi = self.interval
        inside = (r >= lo) & (r <= hi) & (r > 0)
        out = np.zeros(r.shape)
        if inside.any():
            out[inside] = self.profile(r[inside])
        return out


def lp_norm(x: np.ndarray, gamma_param: float) -> np.ndarray:
    """||x||_gamma = (sum |x_i|^gamma)^(1/gamma) along the last axis."""
    x = np.abs(np.asarray(x, dtype=float))
    scale = x.max(axis=-1)
    safe = np.where(scale > 0, scale, 1.0)
    return scale * ((x / safe[..., None]) ** gamma_param).sum(axis=-1) ** (1.0 / gamma_param)


def reduce_radial(ri: RadialIntegrand, cfg: Optional[QuadConfig] = None) -> QuadResult:
    """C(s, gamma) times the integral of F(r) r^(s-1) over the radial support."""
    cfg = cfg or QuadConfig()
    s = int(ri.s)
    c = surface_constant(s, ri.gamma_param)
    profile = ri.profile

    def integrand(r):
        return profile(r) * r ** (s - 1)

    lo, hi = ri.interval
    if math.isinf(hi):
        res = integrate_semi_infinite(
            integrand,
            lo,
            cfg,
            decay_rate=ri.decay_rate,
            tail_exponent=ri.tail_exponent,
            left_exponent=ri.left_exponent,
            breakpoints=tuple(ri.breakpoints),
        )
    else:
        res = integrate_finite(integrand, lo, hi, cfg, left_exponent=ri.left_exponent, breakpoints=tuple(ri.breakpoints))
    return QuadResult(c * res.value, c * res.abs_error_estimate, res.evaluations, res.converged)


def _proposal(rng: np.random.Generator, n: int, s: int, g: float, k: float, scale: float):
    """Draw n points of the l^g-t mixture and return (points, log density)."""
    coords = rng.gamma(1.0 / g, 1.0, size=(n, s)) ** (1.0 / g)
    w = rng.gamma(k, 1.0, size=n)
    x = scale * coords * w[:, None] ** (-1.0 / g)
    r = lp_norm(x, g) / scale
    # product density c^s exp(-||x||^g), c = g / Gamma(1/g), mixed over W ~ Gamma(k)
    log_c = math.log(g) - math.lgamma(1.0 / g)
    log_p = (
        s * log_c
        + math.lgamma(k + s / g)
        - math.lgamma(k)
        - (k + s / g) * np.log1p(r ** g)
        - s * math.log(scale)
    )
    return x, log_p


def mc_oracle(
    ri: RadialIntegrand,
    samples: int = 1_000_000,
    seed: int = 0,
    *,
    tail_index: float = 1.0,
    scale: float = 1.0,
    strata: int = 16,
    variance_spread_limit: float = 1e4,
) -> tuple[float, float]:
    """Importance-sampling estimate of the integral of F(||x||_gamma) over R_+^s.

    The proposal density decays like ||x||^(-s - tail_index); choose
    ``tail_index`` below the decay margin of the integrand (for
    F ~ r^(-s-eps), tail_index = eps/2 keeps the weights bounded).  Samples
    are split into ``strata`` independent PCG64 substreams spawned from
    ``seed``, so results do not depend on evaluation order.

    Returns (estimate, standard error).  Raises InsufficientDecayError when
    the per-stratum variances disagree by more than ``variance_spread_limit``,
    the signature of an infinite-variance estimator.
    """
    if ri.s > 4:
        raise DomainError("the Monte-Carlo oracle is meant for s <= 4")
    if samples < strata * 2:
        raise DomainError("need at least two samples per stratum")
    if ri.decay_rate is None and ri.tail_exponent is not None and not tail_index < 2.0 * ri.tail_exponent:
        # weights grow like r^(tail_index - eps): the second moment needs tail_index < 2 eps
        raise InsufficientDecayError(
            f"tail_index {tail_index!r} gives the estimator infinite variance for an integrand "
            f"decaying like r^(-s-{ri.tail_exponent!r}); use tail_index < {2.0 * ri.tail_exponent!r}"
        )
    s = int(ri.s)
    g = float(ri.gamma_param)
    k = tail_index / g
    children = np.random.SeedSequence(seed).spawn(strata)
    sizes = [samples // strata + (1 if i < samples % strata else 0) for i in range(strata)]
    means = np.empty(strata)
    variances = np.empty(strata)
    for i, (child, n) in enumerate(zip(children, sizes)):
        rng = np.random.Generator(np.random.PCG64(child))
        x, log_p = _proposal(rng, n, s, g, k, scale)
        f = ri(x)
        weights = np.zeros(n)
        nz = f != 0
        weights[nz] = f[nz] * np.exp(-log_p[nz])
        means[i] = weights.mean()
        variances[i] = weights.var(ddof=1)
    sizes = np.array(sizes, dtype=float)
    estimate = float(np.dot(sizes, means) / sizes.sum())
    pooled = float((np.dot(sizes - 1, variances) + np.dot(sizes, (means - estimate) ** 2)) / (sizes.sum() - 1))
    positive = variances[variances > 0]
    if positive.size and positive.max() > variance_spread_limit * np.median(positive):
        raise InsufficientDecayError(
            f"stratum variances range over {positive.max() / np.median(positive):.3g}x; "
            "the integrand decays too slowly for this proposal"
        )
    return estimate, math.sqrt(pooled / sizes.sum())


@dataclass(frozen=True)
class WitnessResult:
    s: int
    gamma_param: float
    radii: tuple[float, ...]
    partial_integrals: tuple[float, ...]
    slope: float
    expected_slope: float

    @property
    def rel_deviation(self) -> float:
        return abs(self.slope - self.expected_slope) / self.expected_slope


def divergence_witness(
    s: int,
    gamma_param: float,
    radii: Sequence[float] = (1e2, 1e4, 1e6),
    cfg: Optional[QuadConfig] = None,
) -> WitnessResult:
    """Show that the integral of ||x||^(-s) over ||x|| >= 1 grows like C(s, gamma) log R.

    Partial integrals over 1 <= ||x|| <= R are computed by ``reduce_radial``;
    the least-squares slope against log R is returned next to C(s, gamma).
    """
    radii = tuple(float(r) for r in radii)
    values = []
    for R in radii:
        ri = RadialIntegrand(
            s,
            gamma_param,
            lambda r, s=s: r ** (-float(s)),
            SupportHint.UNIT_BALL_EXTERIOR,
            bounds=(1.0, R),
            breakpoints=tuple(10.0 ** k for k in range(1, int(math.log10(R)) + 1)),
        )
        values.append(reduce_radial(ri, cfg).require("truncated power integral").value)
    slope = float(np.polyfit(np.log(radii), values, 1)[0])
    return WitnessResult(int(s), float(gamma_param), radii, tuple(values), slope, surface_constant(s, gamma_param))
