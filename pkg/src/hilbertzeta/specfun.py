"""Real-argument Gamma and zeta functions and the closed-form constants.

All constants are assembled from three ingredients:

* ``surface_constant(s, gamma)`` -- the factor turning an integral of a
  function of ``||x||_gamma`` over the positive orthant of R^s into a
  one-dimensional radial integral,
* ``mellin_coth_constant(sigma)`` -- the Mellin transform of ``coth v - 1``,
* the conjugate exponents ``p`` and ``q``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import DomainError, ParameterError

__all__ = [
    "ProblemParams",
    "FormulaId",
    "ClosedFormConstant",
    "gamma",
    "zeta",
    "zeta_with_bound",
    "mellin_coth_constant",
    "surface_constant",
    "best_constant_K",
    "K1",
    "K2",
    "constant_table",
]


@dataclass(frozen=True)
class ProblemParams:
    """One instance (m, n, alpha, beta, sigma, p) of the inequality.

    ``q`` is never stored; it is derived from ``p`` so the pair is always
    conjugate.
    """

    m: int
    n: int
    alpha: float
    beta: float
    sigma: float
    p: float

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise ParameterError(f"m must be a positive integer, got {self.m!r}")
        if int(self.n) != self.n or self.n < 1:
            raise ParameterError(f"n must be a positive integer, got {self.n!r}")
        if not self.alpha > 0 or not self.beta > 0:
            raise ParameterError("alpha and beta must be positive")
        if not self.sigma > 1:
            raise ParameterError(f"sigma must exceed 1, got {self.sigma!r}")
        if not math.isfinite(self.p) or self.p in (0, 1):
            raise ParameterError(f"p must be finite and not 0 or 1, got {self.p!r}")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "n", int(self.n))

    @property
    def q(self) -> float:
        return self.p / (self.p - 1.0)

    @property
    def forward(self) -> bool:
        """True in the regime p > 1, where the inequality is not reversed."""
        return self.p > 1

    def swapped(self) -> "ProblemParams":
        """Exchange the roles of x and y (and of p and q)."""
        return ProblemParams(self.n, self.m, self.beta, self.alpha, self.sigma, self.q)

    def as_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "alpha": self.alpha,
            "beta": self.beta,
            "sigma": self.sigma,
            "p": self.p,
            "q": self.q,
        }


class FormulaId(str, enum.Enum):
    K = "K"
    K1 = "K1"
    K2 = "K2"
    MELLIN_COTH = "MellinCoth"
    SURFACE_C = "SurfaceC"


@dataclass(frozen=True)
class ClosedFormConstant:
    value: float
    formula_id: FormulaId
    params: dict = field(default_factory=dict)


# Lanczos approximation, g = 6.024680040776729583740234375, N = 13, in the
# rational form used by Boost and CPython.  Relative error is a few ulp on
# (0, 171.6).
_LANCZOS_G = 6.024680040776729583740234375
_LANCZOS_G_MINUS_HALF = 5.524680040776729583740234375
_LANCZOS_NUM = (
    23531376880.410759688572007674451636754734846804940,
    42919803642.649098768957899047001988850926355848959,
    35711959237.355668049440185451547166705960488635843,
    17921034426.037209699919755754458931112671403265390,
    6039542586.3520280050642916443072979210699388420708,
    1439720407.3117216736632230727949123939715485786772,
    248874557.86205415651146038641322942321632125127801,
    31426415.585400194380614231628318205362874684987640,
    2876370.6289353724412254090516208496135991145378768,
    186056.26539522349504029498971604569928220784236328,
    8071.6720023658162106380029022722506138218516325024,
    210.82427775157934587250973392071336271166969580291,
    2.5066282746310002701649081771338373386264310793408,
)
_LANCZOS_DEN = (
    0.0,
    39916800.0,
    120543840.0,
    150917976.0,
    105258076.0,
    45995730.0,
    13339535.0,
    2637558.0,
    357423.0,
    32670.0,
    1925.0,
    66.0,
    1.0,
)
_GAMMA_MAX_ARG = 171.61447887182298


def _lanczos_sum(x: float) -> float:
    num = 0.0
    den = 0.0
    if x < 5.0:
        for a, b in zip(reversed(_LANCZOS_NUM), reversed(_LANCZOS_DEN)):
            num = num * x + a
            den = den * x + b
    else:
        for a, b in zip(_LANCZOS_NUM, _LANCZOS_DEN):
            num = num / x + a
            den = den / x + b
    return num / den


def gamma(x: float) -> float:
    """Gamma function for real x > 0.

    Raises DomainError for x <= 0 and OverflowError when the result exceeds
    the double range (x > 171.6...).
    """
    x = float(x)
    if math.isnan(x) or x <= 0:
        raise DomainError(f"gamma requires x > 0, got {x!r}")
    if x > _GAMMA_MAX_ARG:
        raise OverflowError(f"gamma({x!r}) exceeds the double range")
    if x.is_integer():
        return float(math.factorial(int(x) - 1))
    if x < 1e-20:
        return 1.0 / x
    y = x + _LANCZOS_G_MINUS_HALF
    # z recovers the rounding error committed when forming y
    if x > _LANCZOS_G_MINUS_HALF:
        q = y - x
        z = q - _LANCZOS_G_MINUS_HALF
    else:
        q = y - _LANCZOS_G_MINUS_HALF
        z = q - x
    z = z * _LANCZOS_G / y
    r = _lanczos_sum(x) / math.exp(y)
    r += z * r
    if x < 140.0:
        r *= y ** (x - 0.5)
    else:
        half = y ** (x / 2.0 - 0.25)
        r *= half
        r *= half
    return r


# B_{2j} / (2j)! for j = 1..15
_BERNOULLI_2J = (
    1 / 6,
    -1 / 30,
    1 / 42,
    -1 / 30,
    5 / 66,
    -691 / 2730,
    7 / 6,
    -3617 / 510,
    43867 / 798,
    -174611 / 330,
    854513 / 138,
    -236364091 / 2730,
    8553103 / 6,
    -23749461029 / 870,
    8615841276005 / 14322,
)
_EM_COEFFS = tuple(b / math.factorial(2 * j) for j, b in enumerate(_BERNOULLI_2J, start=1))


def _zeta_em(s: float, n_direct: int) -> tuple[float, float]:
    """Euler-Maclaurin evaluation with ``n_direct`` explicit terms.

    Returns (value, bound) where bound is the modulus of the first omitted
    correction term; for real s > 1 it bounds the remainder.
    """
    N = float(n_direct)
    head = math.fsum(k ** -s for k in range(n_direct - 1, 0, -1))
    tail = N ** (1.0 - s) / (s - 1.0) + 0.5 * N ** -s
    corrections = []
    # rising factorial s (s+1) ... (s+2j-2) times N^{-s-2j+1}
    rising = s
    power = N ** (-s - 1.0)
    bound = math.inf
    for j, c in enumerate(_EM_COEFFS, start=1):
        term = c * rising * power
        if abs(term) < 1e-18 * head or j == len(_EM_COEFFS):
            bound = abs(term)
            break
        corrections.append(term)
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        power /= N * N
    return math.fsum([head, tail, *corrections]), bound


def zeta_with_bound(sigma: float) -> tuple[float, float]:
    """Riemann zeta for real sigma > 1 together with a certified tail bound."""
    s = float(sigma)
    if math.isnan(s) or s <= 1:
        raise DomainError(f"zeta requires sigma > 1, got {s!r}")
    n_direct = 10
    while True:
        value, bound = _zeta_em(s, n_direct)
        if bound <= 1e-16 * value or n_direct >= 640:
            return value, bound
        n_direct *= 2


def zeta(sigma: float) -> float:
    """Riemann zeta function for real sigma > 1."""
    return zeta_with_bound(sigma)[0]


def mellin_coth_constant(sigma: float) -> float:
    """The integral of (coth v - 1) v^(sigma-1) over (0, inf): Gamma(sigma) zeta(sigma) / 2^(sigma-1)."""
    if not sigma > 1:
        raise DomainError(f"mellin_coth_constant requires sigma > 1, got {sigma!r}")
    return gamma(sigma) * zeta(sigma) / 2.0 ** (sigma - 1.0)


def surface_constant(s: int, gamma_param: float) -> float:
    """C(s, gamma) = Gamma(1/gamma)^s / (gamma^(s-1) Gamma(s/gamma)).

    For radial integrands, the integral of F(||x||_gamma) over the positive
    orthant of R^s equals C(s, gamma) times the integral of F(r) r^(s-1) over
    (0, inf).
    """
    if int(s) != s or s < 1:
        raise DomainError(f"s must be a positive integer, got {s!r}")
    if not gamma_param > 0:
        raise DomainError(f"gamma_param must be positive, got {gamma_param!r}")
    s = int(s)
    if s == 1:
        return 1.0
    g = float(gamma_param)
    return gamma(1.0 / g) ** s / (g ** (s - 1) * gamma(s / g))


def K2(params: ProblemParams) -> float:
    """Constant value of the weight omega: C(m, alpha) times the Mellin constant."""
    return surface_constant(params.m, params.alpha) * mellin_coth_constant(params.sigma)


def K1(params: ProblemParams) -> float:
    """Constant value of the weight varpi: C(n, beta) times the Mellin constant.

    The denominator uses beta^(n-1).
    """
    return surface_constant(params.n, params.beta) * mellin_coth_constant(params.sigma)


def best_constant_K(params: ProblemParams) -> float:
    """K(sigma) = C(n, beta)^(1/p) C(m, alpha)^(1/q) Gamma(sigma) zeta(sigma) / 2^(sigma-1)."""
    c_n = surface_constant(params.n, params.beta)
    c_m = surface_constant(params.m, params.alpha)
    return c_n ** (1.0 / params.p) * c_m ** (1.0 / params.q) * mellin_coth_constant(params.sigma)


def constant_table(params: ProblemParams) -> list[ClosedFormConstant]:
    """All closed-form constants of one parameter set."""
    echo = params.as_dict()
    return [
        ClosedFormConstant(best_constant_K(params), FormulaId.K, echo),
        ClosedFormConstant(K1(params), FormulaId.K1, echo),
        ClosedFormConstant(K2(params), FormulaId.K2, echo),
        ClosedFormConstant(mellin_coth_constant(params.sigma), FormulaId.MELLIN_COTH, {"sigma": params.sigma}),
        ClosedFormConstant(
            surface_constant(params.m, params.alpha), FormulaId.SURFACE_C, {"s": params.m, "gamma": params.alpha}
        ),
        ClosedFormConstant(
            surface_constant(params.n, params.beta), FormulaId.SURFACE_C, {"s": params.n, "gamma": params.beta}
        ),
    ]
