"""Both sides of the coth - 1 Hilbert-type inequality and its relatives.

For radial f(x) = F(||x||_alpha) on R_+^m and g(y) = G(||y||_beta) on R_+^n
every quantity collapses to one- or two-dimensional integrals:

    (Tf)(rho) = C(m, alpha) int_0^inf (coth(r/rho) - 1) F(r) r^(m-1) dr
    I         = C(n, beta)  int_0^inf G(rho) rho^(n-1) (Tf)(rho) d rho
    J^p       = C(n, beta)  int_0^inf rho^(-p sigma - 1) (Tf)(rho)^p d rho
    ||f||_{p,Phi}^p = C(m, alpha) int_0^inf r^(p(m-sigma)-1) F(r)^p dr
    ||g||_{q,Psi}^q = C(n, beta)  int_0^inf rho^(q(n+sigma)-1) G(rho)^q d rho

Write u = m - sigma + a and t = n + sigma + b for the power-law exponents
a of F and b of G at 0 ("in") and at infinity ("out").  Then

* ||f||_{p,Phi} < inf  iff  p u_in > 0 and p u_out < 0,
* ||g||_{q,Psi} < inf  iff  q t_in > 0 and q t_out < 0,
* Tf is finite iff a_in + m > 1, with Tf(rho) ~ rho^(m + a_in) at 0 and
  ~ rho^max(1, m + a_out) at infinity (rho^1 when F decays exponentially),
* I < inf iff additionally u_in + t_in > 0, u_out + t_out < 0 and
  b_out + n + 1 < 0.

In the forward regime p > 1 the finite norms already imply everything
else.  The reverse batteries below pick exponents inside these windows.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Iterable, Optional

import numpy as np

from . import specfun
from .errors import InadmissibleError, ParameterError
from .kernel import coth, coth_minus_one
from .profiles import DoublePower, ExpPower, RadialProfile, TruncatedPower
from .quad import (
    BatchResult,
    QuadConfig,
    QuadResult,
    integrate_double_radial,
    integrate_finite,
    integrate_semi_infinite,
    integrate_semi_infinite_batch,
)
from .radial import RadialIntegrand, reduce_radial
from .specfun import ProblemParams, surface_constant

__all__ = [
    "Direction",
    "VerifyReport",
    "DivergenceScan",
    "norm_p_phi",
    "norm_q_psi",
    "l1_norm",
    "divergence_scan",
    "transform_at",
    "bilinear_I",
    "bilinear_I_coth",
    "equivalent_J",
    "check_inequality",
    "check_full_coth",
    "check_holder_chain",
    "forward_battery",
    "reverse_battery",
    "full_coth_battery",
]

# floor for identities that hold exactly in real arithmetic
_ROUNDING = 64 * np.finfo(float).eps


class Direction(str, enum.Enum):
    FORWARD = "forward"
    REVERSE = "reverse"


def direction_of(params: ProblemParams) -> Direction:
    return Direction.FORWARD if params.p > 1 else Direction.REVERSE


@dataclass(frozen=True)
class VerifyReport:
    """One inequality check.

    ``holds`` is the main claim (both the I- and the J-inequality for
    ``check_inequality``, the coth forms for ``check_full_coth``, the
    weighted chain for ``check_holder_chain``).  ``checks`` holds further named sub-claims; ``passed`` requires
    all of them.  Fields that a check does not compute are NaN.
    """

    check: str
    label: str
    direction: Direction
    I: float
    J: float
    f_norm: float
    g_norm: float
    K: float
    bound: float
    ratio: float
    J_bound: float
    J_ratio: float
    holds: bool
    f_l1: Optional[float] = None
    g_l1: Optional[float] = None
    I_error: float = 0.0
    J_error: float = 0.0
    extras: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.holds and all(self.checks.values()))

    def as_dict(self) -> dict:
        out = asdict(self)
        out["direction"] = self.direction.value
        out["passed"] = self.passed
        return out


def _compare(lhs: float, rhs: float, direction: Direction) -> bool:
    return lhs < rhs if direction == Direction.FORWARD else lhs > rhs


def _check_space(prof: RadialProfile, dim: int, norm_param: float, what: str):
    if prof.dim != dim or prof.norm_param != norm_param:
        raise ParameterError(
            f"{what} lives on R_+^{prof.dim} with the l^{prof.norm_param} norm, "
            f"expected R_+^{dim} with l^{norm_param}"
        )


# ---------------------------------------------------------------- norms


def _weighted_power_norm(prof: RadialProfile, dim: int, norm_param: float, c: float, power: float,
                         method: str, cfg: Optional[QuadConfig]) -> float:
    """(C(dim, norm_param) int r^c F^power dr)^(1/power), inf when the integral diverges."""
    if not prof.moment_converges(c, power):
        return math.inf
    if prof.is_zero():
        return 0.0
    if method == "closed":
        moment = prof.power_moment(c, power)
        return (surface_constant(dim, norm_param) * moment) ** (1.0 / power)
    if method == "quadrature":
        res = reduce_radial(_moment_integrand(prof, dim, norm_param, c, power), cfg).require("weighted norm")
        return res.value ** (1.0 / power)
    raise ParameterError(f"unknown norm method {method!r}")


def _moment_integrand(prof, dim, norm_param, c, power) -> RadialIntegrand:
    # profile r^(c - dim + 1) F^power, so that times r^(dim-1) it is r^c F^power
    shift = c - dim + 1.0
    hints = {}
    if prof.lower == 0:
        hints["left_exponent"] = c + prof.exponent_at_zero * power
    if prof.decay_rate > 0:
        hints["decay_rate"] = prof.decay_rate * power
    else:
        hints["tail_exponent"] = -(c + prof.exponent_at_inf * power) - 1.0
    return RadialIntegrand(
        dim,
        norm_param,
        lambda r: r ** shift * np.power(prof(r), power),
        bounds=(prof.lower, math.inf),
        breakpoints=tuple(prof.breakpoints),
        **hints,
    )


def norm_p_phi(f: RadialProfile, params: ProblemParams, cfg: Optional[QuadConfig] = None,
               method: str = "closed") -> float:
    """||f||_{p,Phi} with Phi(x) = ||x||_alpha^(p(m-sigma)-m); inf marks a divergent integral.

    ``method`` is "closed" (the profile's closed-form moment) or
    "quadrature" (radial reduction plus adaptive quadrature).  Convergence
    is decided from the profile's exponents in both cases.
    """
    _check_space(f, params.m, params.alpha, "f")
    p = params.p
    return _weighted_power_norm(f, params.m, params.alpha, p * (params.m - params.sigma) - 1.0, p, method, cfg)


def norm_q_psi(g: RadialProfile, params: ProblemParams, cfg: Optional[QuadConfig] = None,
               method: str = "closed") -> float:
    """||g||_{q,Psi} with Psi(y) = ||y||_beta^(q(n+sigma)-n); inf marks a divergent integral."""
    _check_space(g, params.n, params.beta, "g")
    q = params.q
    return _weighted_power_norm(g, params.n, params.beta, q * (params.n + params.sigma) - 1.0, q, method, cfg)


def l1_norm(prof: RadialProfile) -> float:
    """Integral of F(||x||) over R_+^dim; inf if divergent."""
    return _weighted_power_norm(prof, prof.dim, prof.norm_param, prof.dim - 1.0, 1.0, "closed", None)


@dataclass(frozen=True)
class DivergenceScan:
    radii: tuple
    partials: tuple
    divergent: bool


def divergence_scan(integrand, lower: float = 0.0, radii: Iterable[float] = (1e3, 2e3, 4e3, 8e3, 1.6e4, 3.2e4,
                    6.4e4, 1.28e5, 2.56e5, 5.12e5, 1.024e6), rel_tol: float = 1e-6,
                    cfg: Optional[QuadConfig] = None, **hints) -> DivergenceScan:
    """Empirical divergence test by truncation growth.

    Partial integrals over [lower, R] are computed while R doubles from 1e3
    to about 1e6.  The integral is declared divergent when the partials keep
    moving in one direction and the total change exceeds ``rel_tol`` times
    the first partial.
    """
    radii = tuple(float(r) for r in radii)
    partials = []
    for R in radii:
        bps = tuple(b for b in hints.get("breakpoints", ()) if lower < b < R) + tuple(
            10.0 ** k for k in range(0, int(math.log10(R)) + 1) if lower < 10.0 ** k < R
        )
        partials.append(
            integrate_finite(integrand, lower, R, cfg, left_exponent=hints.get("left_exponent"),
                             breakpoints=bps).value
        )
    steps = np.diff(partials)
    monotone = bool(np.all(steps > 0) or np.all(steps < 0))
    grew = abs(partials[-1] - partials[0]) > rel_tol * abs(partials[0])
    return DivergenceScan(radii, tuple(partials), monotone and grew)


# ------------------------------------------------------------ operator T


def _one_signed(cfg: Optional[QuadConfig]) -> QuadConfig:
    """Relative control only: Tf, I and J have integrands of one sign, so no absolute floor is needed.

    A floor would decide convergence for small-amplitude profiles, e.g.
    r^5 exp(-1000 r), whose transforms are ~1e-14 everywhere.
    """
    return replace(cfg or QuadConfig(), abs_tol=np.finfo(float).tiny)


def _tf_exponents(f: RadialProfile, m: int) -> tuple[Optional[float], float]:
    """Power laws of Tf at 0 (None: faster than any power) and at infinity."""
    at_zero = None if f.lower > 0 else m + f.exponent_at_zero
    if f.decay_rate > 0:
        at_inf = 1.0
    else:
        at_inf = max(1.0, m + f.exponent_at_inf)
    return at_zero, at_inf


def _require_tf_finite(f: RadialProfile, m: int):
    if f.lower == 0 and not f.exponent_at_zero + m > 1:
        raise InadmissibleError("Tf is infinite: the profile needs exponent_at_zero + m > 1")


def _inner_hints(f: RadialProfile, m: int, kernel_decay: bool = True):
    """Batch hints for int kernel(r/rho) F(r) r^(m-1) dr, one problem per rho."""

    def hints(rho):
        rho = np.asarray(rho, dtype=float)
        h = {"a": np.full(rho.shape, float(f.lower))}
        h["breakpoints"] = np.column_stack([np.broadcast_to(b, rho.shape) for b in tuple(f.breakpoints)]
                                           + [np.full(rho.shape, float(f.lower))])
        h["markers"] = rho[:, None]
        if f.lower == 0:
            h["left_exponent"] = f.exponent_at_zero + m - 2.0
        if kernel_decay:
            h["decay_rate"] = 2.0 / rho + f.decay_rate
        elif f.decay_rate > 0:
            h["decay_rate"] = np.full(rho.shape, float(f.decay_rate))
        else:
            h["tail_exponent"] = -(f.exponent_at_inf + m)
        return h

    return hints


def _kernel_integrand(f: RadialProfile, m: int, kernel):
    return lambda r, rho: kernel(r / rho) * f(r) * r ** (m - 1)


def transform_at(f: RadialProfile, rho, params: ProblemParams, cfg: Optional[QuadConfig] = None,
                 kernel=coth_minus_one) -> BatchResult:
    """(Tf)(rho) = C(m, alpha) int kernel(r/rho) F(r) r^(m-1) dr at one or many rho."""
    _check_space(f, params.m, params.alpha, "f")
    rho = np.atleast_1d(np.asarray(rho, dtype=float))
    c = surface_constant(params.m, params.alpha)
    if f.is_zero():
        return BatchResult(np.zeros(rho.size), np.zeros(rho.size), 0, np.ones(rho.size, dtype=bool))
    _require_tf_finite(f, params.m)
    k = _kernel_integrand(f, params.m, kernel)
    hints = _inner_hints(f, params.m)(rho)
    a = hints.pop("a")
    res = integrate_semi_infinite_batch(lambda r, idx: k(r, rho[idx]), a, _one_signed(cfg), **hints)
    return BatchResult(c * res.values, c * res.abs_error_estimates, res.evaluations, res.converged)


def _outer_bilinear_hints(f: RadialProfile, g: RadialProfile, m: int, n: int, tf_at_inf: float,
                          kernel_decay: bool) -> dict:
    hints = {"lower": g.lower, "breakpoints": tuple(sorted(set(tuple(f.breakpoints) + tuple(g.breakpoints))))}
    # with the full coth kernel the inner integral tends to ||f||_1 / C as rho -> 0
    at_zero = _tf_exponents(f, m)[0] if kernel_decay else 0.0
    if g.lower == 0 and at_zero is not None:
        hints["left_exponent"] = g.exponent_at_zero + n - 1.0 + at_zero
    if g.decay_rate > 0:
        hints["decay_rate"] = g.decay_rate
    else:
        hints["tail_exponent"] = -(g.exponent_at_inf + n + tf_at_inf)
    return hints


def _bilinear(f, g, params, cfg, kernel, tf_at_inf, kernel_decay) -> QuadResult:
    m, n = params.m, params.n
    c = surface_constant(m, params.alpha) * surface_constant(n, params.beta)

    def outer_map(rho, inner):
        w = c * g(rho) * rho ** (n - 1)
        return w * inner, w

    return integrate_double_radial(
        _kernel_integrand(f, m, kernel),
        _one_signed(cfg),
        inner_hints=_inner_hints(f, m, kernel_decay),
        outer_hints=_outer_bilinear_hints(f, g, m, n, tf_at_inf, kernel_decay),
        outer_map=outer_map,
    )


def bilinear_I(f: RadialProfile, g: RadialProfile, params: ProblemParams,
               cfg: Optional[QuadConfig] = None) -> QuadResult:
    """I = double integral of (coth(||x||/||y||) - 1) f(x) g(y)."""
    _check_space(f, params.m, params.alpha, "f")
    _check_space(g, params.n, params.beta, "g")
    if f.is_zero() or g.is_zero():
        return QuadResult(0.0, 0.0, 0, True)
    _require_tf_finite(f, params.m)
    _, tf_inf = _tf_exponents(f, params.m)
    return _bilinear(f, g, params, cfg, coth_minus_one, tf_inf, True)


def bilinear_I_coth(f: RadialProfile, g: RadialProfile, params: ProblemParams,
                    cfg: Optional[QuadConfig] = None) -> QuadResult:
    """The same double integral with the full kernel coth(||x||/||y||)."""
    _check_space(f, params.m, params.alpha, "f")
    _check_space(g, params.n, params.beta, "g")
    if f.is_zero() or g.is_zero():
        return QuadResult(0.0, 0.0, 0, True)
    _require_tf_finite(f, params.m)
    if not (f.decay_rate > 0 or f.exponent_at_inf + params.m < 0):
        raise InadmissibleError("the coth kernel needs ||f||_1 < inf")
    _, tf_inf = _tf_exponents(f, params.m)
    return _bilinear(f, g, params, cfg, coth, tf_inf, False)


def _j_power(f: RadialProfile, params: ProblemParams, cfg, kernel, inner_abs_tol=None,
             rho_power=None) -> QuadResult:
    """C(n, beta) int rho^w (Tf)(rho)^p d rho, with w = -p sigma - 1 unless given."""
    m, n, p, sigma = params.m, params.n, params.p, params.sigma
    w_exp = -p * sigma - 1.0 if rho_power is None else rho_power
    cm = surface_constant(m, params.alpha)
    cn = surface_constant(n, params.beta)
    at_zero, at_inf = _tf_exponents(f, m)
    outer = {"breakpoints": tuple(f.breakpoints)}
    if at_zero is not None:
        outer["left_exponent"] = w_exp + p * at_zero
    delta = -1.0 - w_exp - p * at_inf
    if not delta > 0:
        raise InadmissibleError("J diverges: the outer integrand does not decay at infinity")
    outer["tail_exponent"] = delta

    def outer_map(rho, inner):
        t = cm * inner
        w = cn * rho ** w_exp
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            val = np.where(t > 0, w * np.power(np.abs(t), p), 0.0 if p > 0 else np.inf)
            slope = np.where(t > 0, w * p * cm * np.power(np.abs(t), p - 1.0), 0.0)
        return val, slope

    return integrate_double_radial(
        _kernel_integrand(f, m, kernel),
        _one_signed(cfg),
        inner_hints=_inner_hints(f, m),
        outer_hints=outer,
        outer_map=outer_map,
        **({} if inner_abs_tol is None else {"inner_abs_tol": inner_abs_tol}),
    )


def _root(res: QuadResult, p: float) -> QuadResult:
    if res.value <= 0:
        return QuadResult(0.0, res.abs_error_estimate, res.evaluations, res.converged)
    val = res.value ** (1.0 / p)
    err = abs(val / (p * res.value)) * res.abs_error_estimate
    return QuadResult(val, err, res.evaluations, res.converged)


def equivalent_J(f: RadialProfile, params: ProblemParams, cfg: Optional[QuadConfig] = None) -> QuadResult:
    """J = (int ||y||^(-p sigma - n) (Tf)(y)^p dy)^(1/p)."""
    _check_space(f, params.m, params.alpha, "f")
    if f.is_zero():
        return QuadResult(0.0, 0.0, 0, True)
    _require_tf_finite(f, params.m)
    return _root(_j_power(f, params, cfg, coth_minus_one), params.p)


def _coth_minus_l1_kernel(v):
    # coth(v) f - f evaluated literally, i.e. with the subtraction done in floating point
    return coth(v) - 1.0


# --------------------------------------------------------------- checks


def _admissible_norms(f, g, params, cfg):
    f_norm = norm_p_phi(f, params, cfg)
    g_norm = norm_q_psi(g, params, cfg)
    for name, val in (("||f||_{p,Phi}", f_norm), ("||g||_{q,Psi}", g_norm)):
        if not 0 < val < math.inf:
            raise InadmissibleError(f"{name} = {val!r}; the check needs 0 < norm < inf")
    return f_norm, g_norm


def check_inequality(f: RadialProfile, g: RadialProfile, params: ProblemParams,
                   cfg: Optional[QuadConfig] = None, label: str = "") -> VerifyReport:
    """Evaluate I < K ||f|| ||g|| and J < K ||f|| (both reversed unless p > 1).

    Also checks the Hoelder step I <= J ||g||_{q,Psi} (reversed in the
    reverse regime) within the quadrature error.
    """
    f_norm, g_norm = _admissible_norms(f, g, params, cfg)
    direction = direction_of(params)
    K = specfun.best_constant_K(params)
    I = bilinear_I(f, g, params, cfg).require("I")
    J = equivalent_J(f, params, cfg).require("J")
    bound = K * f_norm * g_norm
    J_bound = K * f_norm
    holds = _compare(I.value, bound, direction) and _compare(J.value, J_bound, direction)
    slack = I.abs_error_estimate + J.abs_error_estimate * g_norm + _ROUNDING * I.value
    hoelder_rhs = J.value * g_norm
    if direction == Direction.FORWARD:
        chain = I.value <= hoelder_rhs + slack
    else:
        chain = I.value >= hoelder_rhs - slack
    return VerifyReport(
        "inequality", label, direction, I.value, J.value, f_norm, g_norm, K, bound, I.value / bound,
        J_bound, J.value / J_bound, holds, I_error=I.abs_error_estimate, J_error=J.abs_error_estimate,
        extras={"hoelder_rhs": hoelder_rhs},
        checks={"i_j_equivalent": _compare(I.value, bound, direction) == _compare(J.value, J_bound, direction),
                "hoelder_chain": bool(chain)},
    )


def _unit_dimension(params: ProblemParams) -> bool:
    return params.m == params.n == 1 and params.alpha == params.beta == 1


def _plain_norm(prof: RadialProfile, c: float, power: float, cfg) -> float:
    """(int_0^inf x^c F(x)^power dx)^(1/power) by direct one-dimensional quadrature."""
    hints = {}
    if prof.lower == 0:
        hints["left_exponent"] = c + prof.exponent_at_zero * power
    if prof.decay_rate > 0:
        hints["decay_rate"] = prof.decay_rate * power
    else:
        hints["tail_exponent"] = -(c + prof.exponent_at_inf * power) - 1.0
    res = integrate_semi_infinite(lambda x: x ** c * np.power(prof(x), power), prof.lower, cfg,
                                  breakpoints=tuple(prof.breakpoints), **hints).require("one-dimensional norm")
    return res.value ** (1.0 / power)


def check_full_coth(f: RadialProfile, g: RadialProfile, params: ProblemParams,
                         cfg: Optional[QuadConfig] = None, label: str = "") -> VerifyReport:
    """The full-coth forms: I_coth < ||f||_1 ||g||_1 + K ||f|| ||g|| and the J-form.

    The J-form integrates (coth(r/rho) - 1) F(r) with the subtraction done in
    floating point, i.e. the literal "int coth f dx - ||f||_1" with ||f||_1
    moved under the integral sign.  For m = n = alpha = beta = 1 the
    one-dimensional forms with phi, psi and the Mellin constant are checked
    as well, with their norms recomputed by plain quadrature.
    """
    f_norm, g_norm = _admissible_norms(f, g, params, cfg)
    f_l1, g_l1 = l1_norm(f), l1_norm(g)
    for name, val in (("||f||_1", f_l1), ("||g||_1", g_l1)):
        if not 0 < val < math.inf:
            raise InadmissibleError(f"{name} = {val!r}; the full-coth form needs 0 < norm < inf")
    direction = direction_of(params)
    K = specfun.best_constant_K(params)
    I = bilinear_I(f, g, params, cfg).require("I")
    I_coth = bilinear_I_coth(f, g, params, cfg).require("I with the coth kernel")
    # the floating-point subtraction leaves ~1e-16 absolute noise in the inner
    # integrals, so they get an absolute floor instead of pure relative control
    J_coth = _root(_j_power(f, params, cfg, _coth_minus_l1_kernel, inner_abs_tol=(cfg or QuadConfig()).abs_tol),
                params.p).require("J with the coth kernel")
    bound = f_l1 * g_l1 + K * f_norm * g_norm
    J_bound = K * f_norm
    holds = _compare(I_coth.value, bound, direction) and _compare(J_coth.value, J_bound, direction)
    gap = abs(I_coth.value - I.value - f_l1 * g_l1)
    allowance = I_coth.abs_error_estimate + I.abs_error_estimate + _ROUNDING * I_coth.value
    checks = {"kernel_decomposition": bool(gap <= allowance)}
    extras = {"I_minus_kernel": I.value, "decomposition_gap": gap, "decomposition_allowance": allowance}
    if _unit_dimension(params):
        mellin = specfun.mellin_coth_constant(params.sigma)
        phi = _plain_norm(f, params.p * (1.0 - params.sigma) - 1.0, params.p, cfg)
        psi = _plain_norm(g, params.q * (1.0 + params.sigma) - 1.0, params.q, cfg)
        f1 = _plain_norm(f, 0.0, 1.0, cfg)
        g1 = _plain_norm(g, 0.0, 1.0, cfg)
        checks["one_dim_coth"] = _compare(I_coth.value, f1 * g1 + mellin * phi * psi, direction)
        checks["one_dim_j"] = _compare(J_coth.value, mellin * phi, direction)
        extras.update({"one_dim_bound": f1 * g1 + mellin * phi * psi, "one_dim_j_bound": mellin * phi})
    return VerifyReport(
        "full_coth", label, direction, I_coth.value, J_coth.value, f_norm, g_norm, K, bound, I_coth.value / bound,
        J_bound, J_coth.value / J_bound, holds, f_l1, g_l1, I_coth.abs_error_estimate, J_coth.abs_error_estimate,
        extras, checks,
    )


def check_holder_chain(f: RadialProfile, params: ProblemParams, cfg: Optional[QuadConfig] = None,
                       label: str = "") -> VerifyReport:
    """The weighted chain J_1 < (int varpi Phi f^p)^(1/p) with the constant weights.

    J_1 divides the J integrand by omega^(p-1) = K2^(p-1); the right side
    carries varpi = K1.  J_1 is integrated separately from J, so the ratio
    J / J_1 = K2^(1/q) is a genuine numerical identity check.
    """
    f_norm = norm_p_phi(f, params, cfg)
    if not 0 < f_norm < math.inf:
        raise InadmissibleError(f"||f||_{{p,Phi}} = {f_norm!r}; the check needs 0 < norm < inf")
    direction = direction_of(params)
    k1, k2 = specfun.K1(params), specfun.K2(params)
    K = specfun.best_constant_K(params)
    J = equivalent_J(f, params, cfg).require("J")
    weighted = _j_power(f, params, cfg, lambda v: coth_minus_one(v) * k2 ** ((1.0 - params.p) / params.p))
    J1 = _root(weighted, params.p).require("J_1")
    rhs = k1 ** (1.0 / params.p) * f_norm
    identity = J.value / J1.value
    expected = k2 ** (1.0 / params.q)
    tol = 10 * (J.abs_error_estimate / J.value + J1.abs_error_estimate / J1.value) + 1e-12
    return VerifyReport(
        "holder_chain", label, direction, math.nan, J1.value, f_norm, math.nan, K, math.nan, math.nan,
        rhs, J1.value / rhs, _compare(J1.value, rhs, direction), J_error=J1.abs_error_estimate,
        extras={"J": J.value, "J_over_J1": identity, "K2_pow_1_over_q": expected},
        checks={"j_over_j1": bool(abs(identity / expected - 1.0) <= tol)},
    )


# ------------------------------------------------------------ batteries
#
# Profiles are specified through u = m - sigma + a (for f) and
# t = n + sigma + b (for g), which is where the convergence windows of the
# module docstring are simplest.


def _f_power(params, u):
    return params.sigma - params.m + u


def _g_power(params, t):
    return t - params.n - params.sigma


def forward_battery(params: ProblemParams) -> list[tuple[str, RadialProfile, RadialProfile]]:
    """Admissible (f, g) pairs for p > 1: u_in > 0 > u_out and t_in > 0 > t_out."""
    if not params.p > 1:
        raise ParameterError("the forward battery needs p > 1")
    m, n, a, b = params.m, params.n, params.alpha, params.beta
    fs = {
        "exp": ExpPower(_f_power(params, 0.5), 1.0, m, a),
        "double": DoublePower(_f_power(params, 1.0), _f_power(params, -1.0), 1.0, m, a),
        "trunc": TruncatedPower(_f_power(params, -0.5), 1.0, m, a),
    }
    gs = {
        "exp": ExpPower(_g_power(params, 0.5), 1.0, n, b),
        "double": DoublePower(_g_power(params, 0.75), _g_power(params, -1.5), 2.0, n, b),
        "trunc": TruncatedPower(_g_power(params, -1.0), 0.5, n, b),
    }
    pairs = [("exp", "exp"), ("double", "trunc"), ("trunc", "double")]
    return [(f"f={fk},g={gk}", fs[fk], gs[gk]) for fk, gk in pairs]


def reverse_battery(params: ProblemParams) -> list[tuple[str, RadialProfile, RadialProfile]]:
    """Strictly positive DoublePower pairs for p = 1/2 or p = -1.

    p = 1/2 (q = -1):  u_in = 1, t_in = -1/2, u_out = -sigma/2 + ..., t_out = (sigma-1)/2
        so that u_in + t_in = 1/2 > 0, u_out + t_out = -1/2 < 0,
        m + a_out = sigma/2 (J decays since that is < sigma) and
        b_out + n + 1 = -(sigma-1)/2 < 0.
    p = -1 (q = 1/2):  u_in = (1-sigma)/2, t_in = sigma/2, u_out = 1/2, t_out = -1
        so that m + a_in = (sigma+1)/2 > 1, u_in + t_in = 1/2,
        u_out + t_out = -1/2 and b_out + n + 1 = -sigma.
    """
    s = params.sigma
    m, n, a, b = params.m, params.n, params.alpha, params.beta
    if params.p == 0.5:
        u_in, u_out, t_in, t_out = 1.0, -(s - 1.0) / 2.0 - 0.5, -0.5, (s - 1.0) / 2.0
    elif params.p == -1.0:
        u_in, u_out, t_in, t_out = (1.0 - s) / 2.0, 0.5, (s - 1.0) / 2.0 + 0.5, -1.0
    else:
        raise ParameterError("the reverse battery is defined for p = 1/2 and p = -1")
    out = []
    for knee_f, knee_g in ((1.0, 1.0), (0.5, 2.0)):
        f = DoublePower(_f_power(params, u_in), _f_power(params, u_out), knee_f, m, a)
        g = DoublePower(_g_power(params, t_in), _g_power(params, t_out), knee_g, n, b)
        out.append((f"double knees {knee_f:g}/{knee_g:g}", f, g))
    return out


def full_coth_battery(params: ProblemParams) -> list[tuple[str, RadialProfile, RadialProfile]]:
    """Forward pairs with finite l^1 norms as well (a_in + m > 0 > a_out + m for f, likewise g)."""
    if not params.p > 1:
        raise ParameterError("the full-coth battery needs p > 1")
    m, n, a, b = params.m, params.n, params.alpha, params.beta
    s = params.sigma
    pairs = [
        ("f=exp,g=exp", ExpPower(_f_power(params, 0.5), 1.0, m, a), ExpPower(_g_power(params, s + 0.5), 1.0, n, b)),
        ("f=exp2,g=exp", ExpPower(_f_power(params, 1.5), 2.0, m, a), ExpPower(_g_power(params, s + 1.0), 0.5, n, b)),
        ("f=double,g=exp", DoublePower(_f_power(params, 0.5), -m - 1.0, 1.0, m, a),
         ExpPower(_g_power(params, s + 0.5), 1.0, n, b)),
        ("f=exp,g=double", ExpPower(_f_power(params, 1.0), 1.0, m, a),
         DoublePower(_g_power(params, s + 0.5), _g_power(params, -1.0), 1.0, n, b)),
        ("f=trunc,g=exp", TruncatedPower(-m - 1.0, 1.0, m, a), ExpPower(_g_power(params, s + 0.5), 1.0, n, b)),
    ]
    return pairs
