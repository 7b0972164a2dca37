"""Numerical verification of a Hilbert-type inequality with the kernel coth(||x||/||y||) - 1.

The best constant is K(sigma) = C(n, beta)^(1/p) C(m, alpha)^(1/q) Gamma(sigma) zeta(sigma) / 2^(sigma-1)
with the l^gamma surface constants C(s, gamma) = Gamma(1/gamma)^s / (gamma^(s-1) Gamma(s/gamma)).
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConvergenceError,
    DomainError,
    HilbertZetaError,
    InadmissibleError,
    InsufficientDecayError,
    IntegrandError,
    ParameterError,
)
from .profiles import DoublePower, EpsFamilyF, EpsFamilyG, ExpPower, RadialProfile, TruncatedPower, Zero  # noqa: E402
from .quad import QuadConfig, QuadResult  # noqa: E402
from .specfun import (  # noqa: E402
    K1,
    K2,
    ProblemParams,
    best_constant_K,
    gamma,
    mellin_coth_constant,
    surface_constant,
    zeta,
)

__all__ = [
    "__version__",
    "ConvergenceError",
    "DomainError",
    "HilbertZetaError",
    "InadmissibleError",
    "InsufficientDecayError",
    "IntegrandError",
    "ParameterError",
    "DoublePower",
    "EpsFamilyF",
    "EpsFamilyG",
    "ExpPower",
    "RadialProfile",
    "TruncatedPower",
    "Zero",
    "QuadConfig",
    "QuadResult",
    "K1",
    "K2",
    "ProblemParams",
    "best_constant_K",
    "gamma",
    "mellin_coth_constant",
    "surface_constant",
    "zeta",
]
