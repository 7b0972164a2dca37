"""Weight functions omega, varpi, the truncated weight w and its defect theta.

omega and varpi are evaluated in the original radial variable at a fixed
point norm (no rescaling to the unit kernel), so their independence from
that norm is a genuine numerical check rather than an algebraic identity.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from . import specfun
from .errors import ConvergenceError, DomainError
from .kernel import coth_minus_one
from .quad import (
    QuadConfig,
    integrate_finite,
    integrate_finite_batch,
    integrate_semi_infinite,
    integrate_semi_infinite_batch,
)
from .radial import RadialIntegrand, reduce_radial
from .specfun import ProblemParams, mellin_coth_constant, surface_constant

__all__ = [
    "WeightReport",
    "ThetaPoint",
    "TruncatedWeight",
    "ThetaFit",
    "omega",
    "varpi",
    "theta",
    "theta_values",
    "truncated_weight",
    "theta_decay_fit",
]


@dataclass(frozen=True)
class WeightReport:
    sigma: float
    point_norm: float
    computed: float
    closed_form: float
    abs_error_estimate: float = 0.0
    converged: bool = True

    @property
    def rel_deviation(self) -> float:
        return abs(self.computed - self.closed_form) / self.closed_form


@dataclass(frozen=True)
class ThetaPoint:
    sigma_tilde: float
    t: float
    theta: float
    eta_tilde: Optional[float] = None


def _weight_params(sigma, m=1, alpha=1.0, n=1, beta=1.0):
    return ProblemParams(m, n, alpha, beta, sigma, 2.0)


def omega(sigma: float, y_norm: float, m: int, alpha: float, cfg: Optional[QuadConfig] = None) -> WeightReport:
    """omega(sigma, y) at ||y||_beta = y_norm, against K2(sigma).

    Computed as y_norm^(-sigma) C(m, alpha) integral_0^inf (coth(r/y_norm) - 1) r^(sigma-1) dr.
    """
    cfg = cfg or QuadConfig()
    ri = RadialIntegrand(
        m,
        alpha,
        lambda r: coth_minus_one(r / y_norm) * r ** (sigma - m),
        left_exponent=sigma - 2.0,
        decay_rate=2.0 / y_norm,
        breakpoints=(y_norm,),
    )
    scale = y_norm ** -sigma
    # the raw integral is of order y_norm^sigma; keep the absolute floor relative to it
    res = reduce_radial(ri, replace(cfg, abs_tol=cfg.abs_tol / scale))
    closed = specfun.K2(_weight_params(sigma, m=m, alpha=alpha))
    return WeightReport(sigma, y_norm, scale * res.value, closed, scale * res.abs_error_estimate, res.converged)


def varpi(
    sigma: float,
    x_norm: float,
    n: int,
    beta: float,
    cfg: Optional[QuadConfig] = None,
    *,
    alpha: float = 1.0,
    m: int = 1,
) -> WeightReport:
    """varpi(sigma, x) at ||x||_alpha = x_norm, against K1(sigma).

    Computed as x_norm^sigma C(n, beta) integral_0^inf (coth(x_norm/rho) - 1) rho^(-sigma-1) d rho.
    ``alpha`` and ``m`` only enter the closed-form side through K1's
    parameter set.
    """
    cfg = cfg or QuadConfig()

    def profile(rho):
        return coth_minus_one(x_norm / rho) * rho ** (-n - sigma)

    ri = RadialIntegrand(
        n,
        beta,
        profile,
        breakpoints=(x_norm,),
        tail_exponent=sigma - 1.0,
    )
    scale = x_norm ** sigma
    res = reduce_radial(ri, replace(cfg, abs_tol=cfg.abs_tol / scale))
    closed = specfun.K1(_weight_params(sigma, m=m, alpha=alpha, n=n, beta=beta))
    return WeightReport(sigma, x_norm, scale * res.value, closed, scale * res.abs_error_estimate, res.converged)


# decade cuts keep a long range [0, upper] from hiding the mass near v ~ sigma_tilde
_DECADES = tuple(10.0 ** k for k in range(0, 7))


def _lower_mellin(sigma_tilde: float, upper: float, cfg: QuadConfig):
    """integral_0^upper (coth v - 1) v^(sigma_tilde - 1) dv."""
    return integrate_finite(
        lambda v: coth_minus_one(v) * v ** (sigma_tilde - 1.0),
        0.0,
        upper,
        cfg,
        left_exponent=sigma_tilde - 2.0,
        breakpoints=tuple(d for d in _DECADES + (sigma_tilde,) if d < upper),
    )


def theta(sigma_tilde: float, t: float, cfg: Optional[QuadConfig] = None) -> ThetaPoint:
    """theta(t) = integral_0^(1/t) (coth v - 1) v^(sigma_tilde-1) dv divided by its value on (0, inf)."""
    cfg = cfg or QuadConfig()
    if not sigma_tilde > 1:
        raise DomainError("theta requires sigma_tilde > 1")
    if not t > 0:
        raise DomainError("theta requires t > 0")
    res = _lower_mellin(sigma_tilde, 1.0 / t, cfg.tightened(0.1)).require("theta integral")
    value = res.value / mellin_coth_constant(sigma_tilde)
    return ThetaPoint(sigma_tilde, t, min(value, 1.0))


def theta_values(sigma_tilde: float, t, cfg: Optional[QuadConfig] = None) -> tuple[np.ndarray, np.ndarray]:
    """theta(t) and 1 - theta(t) for an array of t, each to full relative accuracy.

    The complement is integrated directly over (1/t, inf) rather than formed
    as 1 - theta, which would cancel catastrophically for small t.
    """
    cfg = (cfg or QuadConfig()).tightened(0.1)
    cfg = replace(cfg, abs_tol=np.finfo(float).tiny)
    if not sigma_tilde > 1:
        raise DomainError("theta requires sigma_tilde > 1")
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if not (t > 0).all():
        raise DomainError("theta requires t > 0")
    upper = 1.0 / t

    def integrand(v, idx):
        return coth_minus_one(v) * v ** (sigma_tilde - 1.0)

    cuts = np.minimum(np.array(_DECADES + (sigma_tilde,))[None, :], upper[:, None])
    lower = integrate_finite_batch(integrand, np.zeros(t.size), upper, cfg, left_exponent=sigma_tilde - 2.0,
                                   breakpoints=cuts)
    tail = integrate_semi_infinite_batch(integrand, upper, cfg, decay_rate=np.full(t.size, 2.0))
    if not (lower.converged.all() and tail.converged.all()):
        raise ConvergenceError("theta integrals did not converge")
    mellin = mellin_coth_constant(sigma_tilde)
    return lower.values / mellin, tail.values / mellin


@dataclass(frozen=True)
class TruncatedWeight:
    sigma_tilde: float
    y_norm: float
    direct: float
    via_theta: float
    K2: float

    @property
    def deviation(self) -> float:
        """|direct - K2 (1 - theta)| relative to K2."""
        return abs(self.direct - self.via_theta) / self.K2


def truncated_weight(
    sigma_tilde: float, y_norm: float, m: int, alpha: float, cfg: Optional[QuadConfig] = None
) -> TruncatedWeight:
    """w(sigma_tilde, y) computed directly and as K2(sigma_tilde) (1 - theta(y_norm))."""
    cfg = cfg or QuadConfig()
    c = surface_constant(m, alpha)
    lo = 1.0 / y_norm
    tail = integrate_semi_infinite(
        lambda v: coth_minus_one(v) * v ** (sigma_tilde - 1.0),
        lo,
        cfg.tightened(0.1),
        decay_rate=2.0,
        pivot=max(lo, 5.0),
    ).require("truncated weight")
    k2 = c * mellin_coth_constant(sigma_tilde)
    th = theta(sigma_tilde, y_norm, cfg).theta
    return TruncatedWeight(sigma_tilde, y_norm, c * tail.value, k2 * (1.0 - th), k2)


@dataclass(frozen=True)
class ThetaFit:
    sigma_tilde: float
    slope: float
    points: tuple
    censored: tuple

    @property
    def empirical_exponent(self) -> float:
        return self.sigma_tilde - 1.0

    def guaranteed_bound(self, gamma_prime: float) -> float:
        """The decay rate sigma_tilde - gamma' guaranteed for gamma' in (1, sigma_tilde), as a slope."""
        return -(self.sigma_tilde - gamma_prime)


def theta_decay_fit(sigma_tilde: float, t_grid: Sequence[float], cfg: Optional[QuadConfig] = None) -> ThetaFit:
    """Least-squares slope of log theta against log t.

    Points where theta underflows to zero are reported as censored and left
    out of the fit.
    """
    t_grid = sorted(float(t) for t in t_grid)
    if len(t_grid) < 2 or min(t_grid) < 1:
        raise DomainError("theta_decay_fit needs at least two grid points, all >= 1")
    points = [theta(sigma_tilde, t, cfg) for t in t_grid]
    kept = [pt for pt in points if pt.theta > 0]
    censored = tuple(pt.t for pt in points if pt.theta <= 0)
    if len(kept) < 2:
        raise DomainError("fewer than two uncensored theta values")
    x = np.log([pt.t for pt in kept])
    y = np.log([pt.theta for pt in kept])
    slope = float(np.polyfit(x, y, 1)[0])
    return ThetaFit(sigma_tilde, slope, tuple(points), censored)
