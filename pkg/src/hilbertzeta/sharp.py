"""Sharpness of K(sigma): the extremal eps-family and the operator norm of T.

For the truncated powers

    f_eps(x) = ||x||^(sigma - eps/p - m) on ||x|| >= 1,
    g_eps(y) = ||y||^(-sigma - eps/q - n) on ||y|| >= 1,

substituting v = r/rho in the inner integral gives, with sigma_t = sigma - eps/p,

    (T f_eps)(rho) = rho^sigma_t K2(sigma_t) (1 - theta(rho)),

where theta is the normalised lower tail of the Mellin integral.  Hence

    I_eps   = C(n, beta) K2(sigma_t) [1/eps - int_1^inf rho^(-1-eps) theta d rho],
    J_eps^p = C(n, beta) K2(sigma_t)^p int_0^inf rho^(-1-eps) (1 - theta)^p d rho,

and ||f_eps||^p = C(m, alpha)/eps, ||g_eps||^q = C(n, beta)/eps.  The 1/eps
parts are exact, only O(1) remainders go to quadrature; this is what makes
eps = 0.002 tractable, since the raw integrands decay like rho^(-1-eps).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from . import specfun
from .errors import ConvergenceError, ParameterError
from .profiles import EpsFamilyF, EpsFamilyG, ExpPower, RadialProfile
from .quad import QuadConfig, QuadResult, integrate_finite, integrate_semi_infinite
from .kernel import coth_minus_one
from .specfun import ProblemParams, surface_constant
from .verify import _j_power, _root, bilinear_I, equivalent_J, norm_p_phi, norm_q_psi, transform_at
from .weights import theta_values

__all__ = [
    "SharpnessPoint",
    "OpNormEstimate",
    "apply_T",
    "Tf_norm",
    "tf_weight_exponent",
    "eps_family_ratio",
    "sharpness_sweep",
    "extrapolate_to_zero",
    "opnorm_search",
]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SharpnessPoint:
    eps: float
    sigma_tilde: float
    I_tilde: float
    product_norms: float
    ratio: float
    gap: float
    I_tilde_error: float = 0.0
    I_tilde_direct: Optional[float] = None

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class OpNormEstimate:
    family_id: str
    best_ratio: float
    argmax_params: dict
    K_value: float
    converged: bool
    probes: tuple = field(default=())

    @property
    def relative_to_K(self) -> float:
        return self.best_ratio / self.K_value

    def within_bound(self, rel_tol: float = 1e-8) -> bool:
        """No probe exceeded K(sigma) by more than rel_tol."""
        return all(r <= self.K_value * (1.0 + rel_tol) for _, r in self.probes)

    def as_dict(self) -> dict:
        out = asdict(self)
        out["probes"] = [list(p) for p in self.probes]
        return out


def _forward_only(params: ProblemParams):
    if not params.p > 1:
        raise ParameterError("T and its norm are defined for p > 1")


def apply_T(f: RadialProfile, y_norm, params: ProblemParams, cfg: Optional[QuadConfig] = None):
    """(Tf)(y) at ||y||_beta = y_norm; a float for scalar input, an array otherwise."""
    res = transform_at(f, y_norm, params, cfg)
    bad = ~res.converged
    if bad.any():
        raise ConvergenceError(f"Tf did not converge at {np.atleast_1d(y_norm)[bad]!r}")
    return float(res.values[0]) if np.ndim(y_norm) == 0 else res.values


def tf_weight_exponent(p, q, n, sigma):
    """The exponent (q(n+sigma) - n)(1 - p) of Psi^(1-p); equals -p sigma - n."""
    return (q * (n + sigma) - n) * (1 - p)


def Tf_norm(f: RadialProfile, params: ProblemParams, cfg: Optional[QuadConfig] = None) -> QuadResult:
    """||Tf||_{p, Psi^(1-p)} with the weight exponent taken literally as (q(n+sigma)-n)(1-p)."""
    _forward_only(params)
    if f.is_zero():
        return QuadResult(0.0, 0.0, 0, True)
    rho_power = tf_weight_exponent(params.p, params.q, params.n, params.sigma) + params.n - 1
    return _root(_j_power(f, params, cfg, coth_minus_one, rho_power=rho_power), params.p).require("||Tf||")


# ---------------------------------------------------------------- eps-family


def _check_eps(params: ProblemParams, eps: float):
    if not 0 < eps < params.p * (params.sigma - 1):
        raise ParameterError(f"eps must lie in (0, p(sigma-1)) = (0, {params.p * (params.sigma - 1)!r}), got {eps!r}")


def _theta_tail_moment(sigma_t: float, eps: float, cfg: QuadConfig) -> QuadResult:
    """int_1^inf rho^(-1-eps) theta(rho) d rho (theta ~ rho^(1-sigma_t) at infinity)."""
    return integrate_semi_infinite(
        lambda rho: rho ** (-1.0 - eps) * theta_values(sigma_t, rho, cfg)[0],
        1.0,
        cfg,
        tail_exponent=eps + sigma_t - 1.0,
    ).require("theta moment")


def _eps_I(params: ProblemParams, eps: float, cfg: QuadConfig) -> tuple[float, float, float]:
    """(I_eps, its error estimate, sigma_t) through the theta reduction."""
    sigma_t = params.sigma - eps / params.p
    k2 = specfun.K2(replace(params, sigma=sigma_t))
    cn = surface_constant(params.n, params.beta)
    moment = _theta_tail_moment(sigma_t, eps, cfg)
    return cn * k2 * (1.0 / eps - moment.value), cn * k2 * moment.abs_error_estimate, sigma_t


def eps_family_ratio(params: ProblemParams, eps: float, cfg: Optional[QuadConfig] = None) -> float:
    """||T f_eps|| / ||f_eps||_{p,Phi} through the theta reduction."""
    _forward_only(params)
    _check_eps(params, eps)
    cfg = cfg or QuadConfig()
    p = params.p
    sigma_t = params.sigma - eps / p
    k2 = specfun.K2(replace(params, sigma=sigma_t))

    def defect(rho):
        th, comp = theta_values(sigma_t, rho, cfg)
        # 1 - (1 - theta)^p without cancellation
        return rho ** (-1.0 - eps) * -np.expm1(p * np.log1p(-th))

    def inner(rho):
        comp = theta_values(sigma_t, rho, cfg)[1]
        return rho ** (-1.0 - eps) * comp ** p

    above = integrate_semi_infinite(defect, 1.0, cfg, tail_exponent=eps + sigma_t - 1.0).require("J tail defect")
    below = integrate_finite(inner, 0.0, 1.0, cfg).require("J lower part")
    # eps * J^p / ||f||^p with ||f||^p = C(m, alpha) / eps
    scaled = eps * (1.0 / eps - above.value + below.value)
    cn = surface_constant(params.n, params.beta)
    cm = surface_constant(params.m, params.alpha)
    return k2 * (cn / cm) ** (1.0 / p) * scaled ** (1.0 / p)


def sharpness_sweep(params: ProblemParams, eps_list: Sequence[float], cfg: Optional[QuadConfig] = None,
                    direct_check: bool = True) -> list[SharpnessPoint]:
    """Ratios I_eps / (K ||f_eps|| ||g_eps||) along a decreasing eps list.

    With ``direct_check`` the largest eps is also integrated as a raw double
    integral of the truncated powers and stored in ``I_tilde_direct``.
    """
    _forward_only(params)
    eps_list = [float(e) for e in eps_list]
    if not eps_list:
        raise ParameterError("eps_list is empty")
    for e in eps_list:
        _check_eps(params, e)
    cfg = cfg or QuadConfig()
    K = specfun.best_constant_K(params)
    largest = max(eps_list)
    points = []
    for eps in eps_list:
        I_val, I_err, sigma_t = _eps_I(params, eps, cfg)
        f = EpsFamilyF(params.sigma, eps, params.p, params.m, params.alpha)
        g = EpsFamilyG(params.sigma, eps, params.q, params.n, params.beta)
        product = norm_p_phi(f, params) * norm_q_psi(g, params)
        direct = None
        if direct_check and eps == largest:
            direct = bilinear_I(f, g, params, cfg).require("raw eps-family double integral").value
        ratio = I_val / (K * product)
        points.append(SharpnessPoint(eps, sigma_t, I_val, product, ratio, 1.0 - ratio, I_err, direct))
    return points


def extrapolate_to_zero(points: Sequence[SharpnessPoint]) -> tuple[float, float]:
    """Linear extrapolation of ratio(eps) to eps = 0 from the two smallest eps.

    Returns (limit, residual), where the residual is the miss of that line at
    the next larger eps, a measure of the curvature the line ignores.
    """
    pts = sorted(points, key=lambda pt: pt.eps)
    if len(pts) < 3:
        raise ParameterError("need at least three sharpness points")
    a, b, c = pts[0], pts[1], pts[2]
    slope = (b.ratio - a.ratio) / (b.eps - a.eps)
    limit = a.ratio - slope * a.eps
    residual = abs(a.ratio + slope * (c.eps - a.eps) - c.ratio)
    return limit, residual


# ---------------------------------------------------------------- opnorm


def _golden_max(func, lo: float, hi: float, tol: float, max_iter: int = 200):
    """Maximise func on [lo, hi]; returns (x, value, probes, converged)."""
    probes = []

    def probe(x):
        v = func(x)
        probes.append((x, v))
        return v

    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = probe(x1), probe(x2)
    converged = False
    for _ in range(max_iter):
        if hi - lo <= tol:
            converged = True
            break
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = probe(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = probe(x2)
    # the bracket ends are candidates too: a monotone ratio peaks at the boundary
    for x in (lo, hi):
        probe(x)
    best = max(probes, key=lambda pv: pv[1])
    return best[0], best[1], probes, converged


def opnorm_search(params: ProblemParams, family: str = "eps", cfg: Optional[QuadConfig] = None, *,
                  eps_range: Optional[tuple[float, float]] = None, shape_range: tuple[float, float] = (0.05, 50.0),
                  rate: float = 1.0, log_tol: float = 1e-3) -> OpNormEstimate:
    """Maximise ||Tf|| / ||f||_{p,Phi} over a one-parameter family by golden-section search in log scale.

    ``family`` is "eps" (the truncated powers, parameter eps in
    ``eps_range``, default (1e-3, p(sigma-1)/2)) or "exp" (ExpPower with
    a = sigma - m + s, s in ``shape_range``; the rate is irrelevant by
    dilation invariance and only fixes the scale).
    """
    _forward_only(params)
    cfg = cfg or QuadConfig()
    K = specfun.best_constant_K(params)
    if family == "eps":
        lo, hi = eps_range or (1e-3, params.p * (params.sigma - 1) / 2.0)
        _check_eps(params, lo)
        _check_eps(params, hi)

        def ratio(log_eps):
            return eps_family_ratio(params, math.exp(log_eps), cfg)

        name = "eps"
    elif family == "exp":
        lo, hi = shape_range

        def ratio(log_s):
            f = ExpPower(params.sigma - params.m + math.exp(log_s), rate, params.m, params.alpha)
            return equivalent_J(f, params, cfg).require("J").value / norm_p_phi(f, params)

        name = "shape_offset"
    else:
        raise ParameterError(f"unknown family {family!r}")
    x, best, probes, converged = _golden_max(ratio, math.log(lo), math.log(hi), log_tol)
    probes = tuple(sorted((math.exp(px), pv) for px, pv in probes))
    return OpNormEstimate(family, best, {name: math.exp(x)}, K, converged, probes)
