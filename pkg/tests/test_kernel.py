import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hilbertzeta.errors import DomainError
from hilbertzeta.kernel import SERIES_SWITCH, UNDERFLOW_CLAMP, coth, coth_minus_one

mpmath.mp.dps = 40


@pytest.mark.parametrize("v", [1e-12, 1e-6, 9.9e-5, 1e-4, 1.01e-4, 1e-2, 0.5, 1.0, 3.0, 20.0, 100.0, 349.0])
def test_coth_minus_one_matches_mpmath(v):
    oracle = float(mpmath.coth(v) - 1)
    assert coth_minus_one(v) == pytest.approx(oracle, rel=2e-15)


def test_large_arguments_underflow_to_zero():
    assert coth_minus_one(UNDERFLOW_CLAMP + 1.0) == 0.0
    assert coth_minus_one(1e6) == 0.0
    assert coth(1e6) == 1.0


def test_continuous_across_series_switch():
    lo = coth_minus_one(np.nextafter(SERIES_SWITCH, 0))
    hi = coth_minus_one(SERIES_SWITCH)
    assert abs(lo - hi) / hi < 1e-14


@given(st.floats(1e-300, 1e3))
def test_positive_and_decreasing(v):
    a = coth_minus_one(v)
    assert a >= 0
    assert coth_minus_one(v * 1.5) <= a


def test_arrays_in_arrays_out_scalars_in_floats_out():
    out = coth_minus_one(np.array([0.5, 1.0]))
    assert isinstance(out, np.ndarray) and out.shape == (2,)
    assert isinstance(coth_minus_one(0.5), float)
    assert isinstance(coth(0.5), float)


def test_coth_is_kernel_plus_one():
    v = np.logspace(-3, 2, 50)
    assert np.allclose(coth(v), 1.0 / np.tanh(v), rtol=1e-14)


@pytest.mark.parametrize("bad", [0.0, -1.0, float("nan")])
def test_domain(bad):
    with pytest.raises(DomainError):
        coth_minus_one(bad)
    with pytest.raises(DomainError):
        coth_minus_one(np.array([1.0, bad]))
