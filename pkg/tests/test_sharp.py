import math
from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from hilbertzeta import specfun
from hilbertzeta.errors import ParameterError
from hilbertzeta.profiles import DoublePower, EpsFamilyF, ExpPower
from hilbertzeta.sharp import (
    Tf_norm,
    apply_T,
    eps_family_ratio,
    extrapolate_to_zero,
    opnorm_search,
    sharpness_sweep,
    tf_weight_exponent,
)
from hilbertzeta.specfun import ProblemParams, surface_constant
from hilbertzeta.verify import equivalent_J, norm_p_phi
from hilbertzeta.weights import theta_values

UNIT = ProblemParams(1, 1, 1.0, 1.0, 2.0, 2.0)


def _h(v):
    return 1.0 / math.tanh(v) - 1.0 if v < 0.1 else 2.0 / math.expm1(2.0 * v) if v < 350 else 0.0


@settings(max_examples=200, deadline=None)
@given(
    st.fractions(min_value=Fraction(11, 10), max_value=20),
    st.integers(1, 6),
    st.fractions(min_value=Fraction(101, 100), max_value=10),
)
def test_weight_exponent_identity_exact(p, n, sigma):
    q = p / (p - 1)
    exp = tf_weight_exponent(p, q, n, sigma)
    assert exp == -p * sigma - n
    # with the radial Jacobian rho^(n-1) this is the weight of the J integral
    assert exp + n - 1 == -p * sigma - 1


@pytest.mark.parametrize("params,f", [
    (UNIT, ExpPower(1.5, 1.0)),
    (ProblemParams(2, 1, 2.0, 1.0, 2.0, 3.0), DoublePower(0.5, -3.5, 1.0, 2, 2.0)),
    (ProblemParams(1, 2, 1.0, 1.5, 3.0, 1.5), ExpPower(3.2, 0.7)),
])
def test_tf_norm_matches_equivalent_j(params, f):
    a = Tf_norm(f, params).value
    b = equivalent_J(f, params).require("J").value
    assert a == pytest.approx(b, rel=1e-9)


def test_apply_t_scalar_and_array():
    f = ExpPower(1.5, 1.0)
    scalar = apply_T(f, 0.7, UNIT)
    assert isinstance(scalar, float)
    arr = apply_T(f, np.array([0.7, 3.0]), UNIT)
    assert isinstance(arr, np.ndarray) and arr.shape == (2,)
    assert arr[0] == pytest.approx(scalar, rel=1e-14)
    oracle = integrate.quad(lambda r: _h(r / 3.0) * f(r), 0, np.inf, epsabs=0, epsrel=1e-12, limit=500)[0]
    assert arr[1] == pytest.approx(oracle, rel=1e-9)


@pytest.mark.parametrize("eps", [0.5, 0.05])
def test_eps_family_transform_closed_form(eps):
    f = EpsFamilyF(UNIT.sigma, eps, UNIT.p)
    rho = np.array([0.2, 1.0, 5.0, 80.0])
    sigma_t = UNIT.sigma - eps / UNIT.p
    comp = theta_values(sigma_t, rho)[1]
    closed = rho ** sigma_t * specfun.K2(replace(UNIT, sigma=sigma_t)) * comp
    assert np.allclose(apply_T(f, rho, UNIT), closed, rtol=1e-9, atol=0)


def test_eps_family_ratio_matches_direct_norm():
    eps = 0.5
    f = EpsFamilyF(UNIT.sigma, eps, UNIT.p)
    direct = Tf_norm(f, UNIT).value / norm_p_phi(f, UNIT)
    assert eps_family_ratio(UNIT, eps) == pytest.approx(direct, rel=1e-8)


@pytest.fixture(scope="module")
def unit_sweep():
    return sharpness_sweep(UNIT, [0.5, 0.1, 0.02, 0.01, 0.002])


def test_sweep_ratio_increases_towards_one(unit_sweep):
    ratios = [pt.ratio for pt in unit_sweep]
    assert all(b > a for a, b in zip(ratios, ratios[1:]))
    assert all(r < 1.0 for r in ratios)
    assert unit_sweep[-1].gap < 1e-2


def test_sweep_product_norms_scale_like_one_over_eps(unit_sweep):
    for pt in unit_sweep:
        assert pt.product_norms * pt.eps == pytest.approx(1.0, rel=1e-12)


def test_sweep_direct_check_agrees(unit_sweep):
    top = unit_sweep[0]
    assert top.I_tilde_direct == pytest.approx(top.I_tilde, rel=1e-7)
    assert all(pt.I_tilde_direct is None for pt in unit_sweep[1:])


def test_sweep_product_norms_general_constants():
    params = ProblemParams(2, 3, 2.0, 0.5, 2.5, 3.0)
    pt = sharpness_sweep(params, [0.1], direct_check=False)[0]
    expected = surface_constant(2, 2.0) ** (1 / 3.0) * surface_constant(3, 0.5) ** (1 - 1 / 3.0)
    assert pt.product_norms * pt.eps == pytest.approx(expected, rel=1e-12)


def test_ratios_independent_of_dimension_and_norm(unit_sweep):
    other = sharpness_sweep(ProblemParams(2, 1, 2.0, 1.0, 2.0, 2.0), [0.5, 0.1], direct_check=False)
    for a, b in zip(unit_sweep[:2], other):
        assert b.ratio == pytest.approx(a.ratio, rel=1e-10)


def test_extrapolation(unit_sweep):
    limit, residual = extrapolate_to_zero(unit_sweep)
    assert abs(limit - 1.0) < 1e-3
    assert residual < 1e-3
    with pytest.raises(ParameterError):
        extrapolate_to_zero(unit_sweep[:2])


def test_eps_out_of_range():
    with pytest.raises(ParameterError):
        sharpness_sweep(UNIT, [2.5])
    with pytest.raises(ParameterError):
        sharpness_sweep(UNIT, [])
    with pytest.raises(ParameterError):
        eps_family_ratio(UNIT, 0.0)
    with pytest.raises(ParameterError):
        eps_family_ratio(replace(UNIT, p=0.5), 0.1)


def test_opnorm_eps_family_approaches_k():
    est = opnorm_search(UNIT, "eps")
    assert est.within_bound(1e-8)
    assert est.relative_to_K >= 0.99
    assert est.argmax_params["eps"] == pytest.approx(1e-3, rel=1e-2)


def test_opnorm_exp_family_stays_below_k():
    est = opnorm_search(UNIT, "exp", shape_range=(0.1, 20.0), log_tol=1e-2)
    assert est.within_bound(1e-8)
    assert est.relative_to_K < 1.0


@pytest.mark.parametrize("a", [5.0, 20.0])
def test_exp_family_ratio_is_rate_invariant(a):
    r1 = equivalent_J(ExpPower(a, 1.0), UNIT).value / norm_p_phi(ExpPower(a, 1.0), UNIT)
    r2 = equivalent_J(ExpPower(a, 1e3), UNIT).value / norm_p_phi(ExpPower(a, 1e3), UNIT)
    assert r2 == pytest.approx(r1, rel=1e-9)


def test_large_shape_is_far_from_extremal():
    f = ExpPower(50.0, 1e3)
    ratio = equivalent_J(f, UNIT).value / norm_p_phi(f, UNIT)
    assert ratio < 0.5 * specfun.best_constant_K(UNIT)


def test_apply_t_limits():
    f = ExpPower(1.5, 1.0)
    small, one = apply_T(f, 1e-6, UNIT), apply_T(f, 1.0, UNIT)
    assert small < 1e-10 * one
    # coth(r/rho) - 1 ~ rho/r for large rho, so Tf grows linearly
    big = apply_T(f, np.array([1e5, 1e6]), UNIT)
    assert big[1] / 1e6 == pytest.approx(big[0] / 1e5, rel=1e-4)
