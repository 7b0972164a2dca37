import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from hilbertzeta.errors import ParameterError
from hilbertzeta.profiles import DoublePower, EpsFamilyF, EpsFamilyG, ExpPower, TruncatedPower, Zero


def _numeric_moment(prof, c, power):
    f = lambda r: r ** c * prof(r) ** power
    pts = sorted(set([prof.lower] + list(prof.breakpoints) + [1.0]))
    total = integrate.quad(f, 0 if prof.lower == 0 else prof.lower, pts[-1], points=pts[1:-1] or None,
                           epsabs=0, epsrel=1e-12, limit=400)[0]
    total += integrate.quad(f, pts[-1], np.inf, epsabs=0, epsrel=1e-12, limit=400)[0]
    return total


@pytest.mark.parametrize("prof,c,power", [
    (TruncatedPower(-2.0, 1.5), 0.5, 1.0),
    (TruncatedPower(-1.0, 0.5, amplitude=2.0), -0.5, 2.0),
    (DoublePower(0.5, -2.0, 2.0), 0.0, 1.0),
    (DoublePower(-0.3, -1.5, 0.7), 0.2, 1.5),
    (ExpPower(0.5, 2.0), 1.0, 1.0),
    (ExpPower(-0.5, 0.5, amplitude=3.0), 0.0, 1.5),
])
def test_power_moment_matches_quadrature(prof, c, power):
    assert prof.power_moment(c, power) == pytest.approx(_numeric_moment(prof, c, power), rel=1e-9)


def test_divergent_moments_are_infinite():
    assert TruncatedPower(-1.0).power_moment(0.0, 1.0) == math.inf
    assert DoublePower(-1.0, -2.0).power_moment(0.0, 1.0) == math.inf
    assert not ExpPower(-1.0).moment_converges(0.0, 1.0)
    assert not TruncatedPower(-2.0).moment_converges(0.0, -1.0)


@given(st.floats(0.1, 10.0), st.floats(-0.9, 2.0), st.floats(0.2, 5.0))
@settings(max_examples=50, deadline=None)
def test_dilation_moves_the_moment_by_a_power(factor, c, power):
    # int r^c F(r/lam)^power dr = lam^(c+1) int r^c F(r)^power dr
    for prof in (ExpPower(0.5, 1.3), DoublePower(0.5, -3.0, 1.2), TruncatedPower(-3.0, 0.8)):
        if not prof.moment_converges(c, power):
            continue
        base = prof.power_moment(c, power)
        assert prof.dilated(factor).power_moment(c, power) == pytest.approx(factor ** (c + 1) * base, rel=1e-10)


@pytest.mark.parametrize("prof", [ExpPower(0.5, 1.3), DoublePower(0.5, -3.0, 1.2), TruncatedPower(-3.0, 0.8)])
def test_dilated_evaluates_as_defined(prof):
    r = np.array([0.3, 1.0, 2.5, 7.0])
    assert np.allclose(prof.dilated(2.0)(r), prof(r / 2.0), rtol=1e-14)


def test_evaluation_shapes_and_support():
    assert isinstance(ExpPower(1.0)(2.0), float)
    assert TruncatedPower(-2.0, 1.0)(0.5) == 0.0
    assert DoublePower(1.0, -1.0, 2.0)(2.0) == pytest.approx(1.0)
    assert np.all(Zero()(np.linspace(0.1, 5, 7)) == 0)
    assert Zero().is_zero() and Zero().power_moment(1.0, 2.0) == 0.0


def test_eps_family_exponents():
    f = EpsFamilyF(2.0, 0.1, 2.0, dim=2)
    g = EpsFamilyG(2.0, 0.1, 2.0, dim=3)
    assert f.exponent == pytest.approx(2.0 - 0.05 - 2)
    assert g.exponent == pytest.approx(-2.0 - 0.05 - 3)
    assert f.cut == g.cut == 1.0
    with pytest.raises(ParameterError):
        EpsFamilyF(2.0, 2.5, 2.0)


def test_validation():
    with pytest.raises(ParameterError):
        TruncatedPower(-2.0, 0.0)
    with pytest.raises(ParameterError):
        DoublePower(1.0, -1.0, -1.0)
    with pytest.raises(ParameterError):
        ExpPower(1.0, 0.0)
