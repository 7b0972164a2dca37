"""The kernel h(v) = coth(v) - 1 = 2 / (e^(2v) - 1) and the full coth kernel.

Both functions accept scalars or numpy arrays.  Scalars in give floats out.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError

__all__ = ["coth_minus_one", "coth", "SERIES_SWITCH", "UNDERFLOW_CLAMP"]

SERIES_SWITCH = 1e-4
UNDERFLOW_CLAMP = 350.0


def _checked(v):
    arr = np.asarray(v, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError("the coth kernel is defined for v > 0 only")
    return arr


def _series(v):
    # 1/v - 1 + v/3 - v^3/45; next term 2 v^5 / 945
    v2 = v * v
    return 1.0 / v - 1.0 + v * (1.0 / 3.0 - v2 / 45.0)


def _direct(v):
    return 2.0 / np.expm1(2.0 * v)


def coth_minus_one(v):
    """coth(v) - 1 for v > 0, accurate across the whole positive axis."""
    arr = _checked(v)
    with np.errstate(over="ignore"):
        out = np.where(
            arr < SERIES_SWITCH,
            _series(np.minimum(arr, SERIES_SWITCH)),
            np.where(arr > UNDERFLOW_CLAMP, 0.0, _direct(np.clip(arr, SERIES_SWITCH, UNDERFLOW_CLAMP))),
        )
    return float(out) if out.ndim == 0 else out


def coth(v):
    """Hyperbolic cotangent for v > 0."""
    out = np.asarray(coth_minus_one(v)) + 1.0
    return float(out) if out.ndim == 0 else out
