import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from hilbertzeta import specfun
from hilbertzeta.errors import InadmissibleError, ParameterError
from hilbertzeta.kernel import coth_minus_one
from hilbertzeta.profiles import DoublePower, ExpPower, TruncatedPower, Zero
from hilbertzeta.quad import QuadConfig, integrate_double_radial
from hilbertzeta.specfun import ProblemParams, surface_constant
from hilbertzeta.verify import (
    Direction,
    bilinear_I,
    bilinear_I_coth,
    check_full_coth,
    check_holder_chain,
    check_inequality,
    full_coth_battery,
    direction_of,
    divergence_scan,
    equivalent_J,
    forward_battery,
    l1_norm,
    norm_p_phi,
    norm_q_psi,
    reverse_battery,
    transform_at,
)

UNIT = ProblemParams(1, 1, 1.0, 1.0, 2.0, 2.0)


def _h(v):
    return 1.0 / math.tanh(v) - 1.0 if v < 0.1 else 2.0 / math.expm1(2.0 * v) if v < 350 else 0.0


def _scipy_tf(f, rho, kernel=_h):
    # split at rho and at the profile's kinks; scipy as the independent oracle
    pts = sorted({rho, *[b for b in f.breakpoints if b > f.lower]})
    lo, total = f.lower, 0.0
    for b in pts:
        if b > lo:
            total += integrate.quad(lambda r: kernel(r / rho) * f(r), lo, b, epsabs=0, epsrel=1e-13, limit=500)[0]
            lo = b
    return total + integrate.quad(lambda r: kernel(r / rho) * f(r), lo, np.inf, epsabs=0, epsrel=1e-13,
                                  limit=500)[0]


def test_transform_against_scipy():
    f = ExpPower(1.5, 1.0)
    rho = np.array([0.01, 0.3, 1.0, 7.0, 200.0])
    res = transform_at(f, rho, UNIT)
    assert res.converged.all()
    oracle = [_scipy_tf(f, r) for r in rho]
    assert np.allclose(res.values, oracle, rtol=1e-10, atol=0)


def test_bilinear_I_against_scipy():
    f, g = ExpPower(1.5, 1.0), ExpPower(-2.5, 1.0)
    I = bilinear_I(f, g, UNIT).require()
    oracle = sum(
        integrate.quad(lambda rho: g(rho) * _scipy_tf(f, rho), a, b, epsabs=0, epsrel=1e-11, limit=200)[0]
        for a, b in ((0, 1), (1, np.inf))
    )
    assert I.value == pytest.approx(oracle, rel=1e-9)
    assert I.value == pytest.approx(0.34790061731095, rel=1e-11)


def test_equivalent_J_against_scipy():
    f = ExpPower(1.5, 1.0)
    J = equivalent_J(f, UNIT).require()
    integrand = lambda rho: rho ** -5.0 * _scipy_tf(f, rho) ** 2
    oracle = sum(integrate.quad(integrand, a, b, epsabs=0, epsrel=1e-11, limit=200)[0]
                 for a, b in ((0, 1), (1, np.inf))) ** 0.5
    assert J.value == pytest.approx(oracle, rel=1e-9)


def test_fubini_inner_order_does_not_matter():
    # I integrated with rho inside and r outside, through the generic double-radial engine
    params = ProblemParams(2, 1, 2.0, 1.0, 1.5, 3.0)
    _, f, g = forward_battery(params)[0]
    cm, cn = surface_constant(2, 2.0), surface_constant(1, 1.0)
    swapped = integrate_double_radial(
        lambda rho, r: coth_minus_one(r / rho) * g(rho) * f(r) * r,
        QuadConfig(rel_tol=1e-11),
        # h(r/rho) kills the rho -> 0 end faster than any power: no left exponent
        inner_hints=lambda r: {"decay_rate": g.rate + 0 * r, "markers": r[:, None]},
        outer_hints={"decay_rate": f.rate, "left_exponent": f.a + 1.0},
    ).require()
    I = bilinear_I(f, g, params).require()
    assert cm * cn * swapped.value == pytest.approx(I.value, abs=I.abs_error_estimate + cm * cn * swapped.abs_error_estimate + 1e-12 * I.value)


@given(st.floats(0.05, 20.0))
@settings(max_examples=5, deadline=None)
def test_ratio_is_dilation_invariant(lam):
    params = ProblemParams(1, 1, 1.0, 1.0, 1.5, 3.0)
    _, f, g = forward_battery(params)[0]
    base = check_inequality(f, g, params)
    moved = check_inequality(f.dilated(lam), g.dilated(lam), params)
    assert moved.ratio == pytest.approx(base.ratio, rel=1e-8)
    assert moved.J_ratio == pytest.approx(base.J_ratio, rel=1e-8)


def test_ratio_ignores_amplitudes():
    params = ProblemParams(2, 1, 2.0, 1.0, 2.0, 1.5)
    _, f, g = forward_battery(params)[1]
    base = check_inequality(f, g, params)
    moved = check_inequality(f.scaled(3.5), g.scaled(0.01), params)
    assert moved.ratio == pytest.approx(base.ratio, rel=1e-9)


@pytest.mark.parametrize("prof,params", [
    (ExpPower(1.5, 1.0), ProblemParams(1, 1, 1.0, 1.0, 2.0, 2.0)),
    (DoublePower(1.0, -2.0, 1.5, 2, 2.0), ProblemParams(2, 1, 2.0, 1.0, 1.5, 3.0)),
    (TruncatedPower(-2.0, 0.5, 3, 2.0), ProblemParams(3, 1, 2.0, 1.0, 2.0, 1.5)),
])
def test_norm_closed_form_matches_quadrature(prof, params):
    a = norm_p_phi(prof, params, method="closed")
    b = norm_p_phi(prof, params, method="quadrature")
    assert a == pytest.approx(b, rel=1e-9)


def test_shape_below_sigma_minus_m_is_inadmissible():
    # r^(p(m - sigma) - 1) F^p ~ r^(-2) at the origin for a = 0.5
    f = ExpPower(0.5, 1.0)
    assert norm_p_phi(f, UNIT, method="closed") == math.inf
    assert norm_p_phi(f, UNIT, method="quadrature") == math.inf
    with pytest.raises(InadmissibleError):
        check_inequality(f, f, UNIT)


def test_divergent_norm_is_infinite():
    # r^(p(m - sigma) - 1) F^p = r^(-3 + 2) on [1, inf)
    assert norm_p_phi(TruncatedPower(1.0, 1.0), UNIT) == math.inf
    assert norm_q_psi(ExpPower(-5.0, 1.0), UNIT) == math.inf


def test_l1_norm():
    assert l1_norm(ExpPower(1.0, 2.0)) == pytest.approx(0.25)
    assert l1_norm(TruncatedPower(-0.5)) == math.inf
    assert l1_norm(ExpPower(0.0, 1.0, 2, 2.0)) == pytest.approx(math.pi / 2, rel=1e-14)


def test_space_mismatch_rejected():
    with pytest.raises(ParameterError):
        norm_p_phi(ExpPower(0.5, 1.0, 2, 1.0), UNIT)


def test_inadmissible_inputs_raise():
    f, g = ExpPower(-0.5, 1.0), ExpPower(-2.5, 1.0)
    with pytest.raises(InadmissibleError):
        bilinear_I(f, g, UNIT)          # Tf infinite: exponent_at_zero + m <= 1
    with pytest.raises(InadmissibleError):
        check_inequality(TruncatedPower(1.0), g, UNIT)
    with pytest.raises(InadmissibleError):
        bilinear_I_coth(TruncatedPower(-0.5), g, UNIT)


def test_zero_function_gives_zero():
    assert bilinear_I(Zero(), ExpPower(-2.5), UNIT).value == 0.0
    assert equivalent_J(Zero(), UNIT).value == 0.0


def test_direction():
    assert direction_of(UNIT) == Direction.FORWARD
    assert direction_of(ProblemParams(1, 1, 1.0, 1.0, 2.0, 0.5)) == Direction.REVERSE
    assert direction_of(ProblemParams(1, 1, 1.0, 1.0, 2.0, -1.0)) == Direction.REVERSE


@pytest.mark.parametrize("dims", [(1, 1, 1.0, 1.0), (2, 1, 2.0, 1.0)])
@pytest.mark.parametrize("p", [1.5, 3.0])
def test_forward_battery_holds_strictly(dims, p):
    params = ProblemParams(*dims, 2.0, p)
    for label, f, g in forward_battery(params):
        rep = check_inequality(f, g, params, label=label)
        assert rep.passed, label
        assert max(rep.ratio, rep.J_ratio) <= 1 - 1e-6
        assert rep.I <= rep.extras["hoelder_rhs"] * (1 + 1e-12)


@pytest.mark.parametrize("p", [0.5, -1.0])
def test_reverse_battery_reverses(p):
    params = ProblemParams(2, 1, 2.0, 1.0, 1.5, p)
    for label, f, g in reverse_battery(params):
        rep = check_inequality(f, g, params, label=label)
        assert rep.direction == Direction.REVERSE
        assert rep.passed and rep.ratio > 1 and rep.J_ratio > 1, label


def test_reverse_battery_only_for_documented_p():
    with pytest.raises(ParameterError):
        reverse_battery(ProblemParams(1, 1, 1.0, 1.0, 2.0, 0.3))
    with pytest.raises(ParameterError):
        forward_battery(ProblemParams(1, 1, 1.0, 1.0, 2.0, 0.5))


def test_full_coth_decomposition_and_one_dim_forms():
    for label, f, g in full_coth_battery(UNIT)[:3]:
        rep = check_full_coth(f, g, UNIT, label=label)
        assert rep.passed, (label, rep.checks)
        assert {"kernel_decomposition", "one_dim_coth", "one_dim_j"} <= set(rep.checks)
        assert rep.extras["decomposition_gap"] <= rep.extras["decomposition_allowance"]


def test_coth_integral_against_scipy():
    label, f, g = full_coth_battery(ProblemParams(1, 1, 1.0, 1.0, 1.5, 2.0))[3]
    params = ProblemParams(1, 1, 1.0, 1.0, 1.5, 2.0)
    Ic = bilinear_I_coth(f, g, params).require()
    coth_k = lambda v: 1.0 / math.tanh(v) if v < 350 else 1.0
    oracle = sum(
        integrate.quad(lambda rho: g(rho) * _scipy_tf(f, rho, coth_k), a, b, epsabs=0, epsrel=1e-11, limit=300)[0]
        for a, b in ((0, 1), (1, np.inf))
    )
    assert Ic.value == pytest.approx(oracle, rel=1e-9)


@pytest.mark.parametrize("p", [2.0, 0.5])
def test_holder_chain(p):
    params = ProblemParams(1, 1, 1.0, 1.0, 2.0, p)
    battery = forward_battery(params) if p > 1 else reverse_battery(params)
    rep = check_holder_chain(battery[0][1], params)
    assert rep.passed
    assert rep.extras["J_over_J1"] == pytest.approx(specfun.K2(params) ** (1 / params.q), rel=1e-9)


def test_report_serialises():
    _, f, g = forward_battery(UNIT)[0]
    d = check_inequality(f, g, UNIT).as_dict()
    assert d["direction"] == "forward" and d["passed"] is True
    assert set(d) >= {"I", "J", "bound", "ratio", "holds", "checks"}


def test_divergence_scan():
    grows = divergence_scan(lambda x: 1.0 / (1.0 + x), 0.0)
    assert grows.divergent
    settles = divergence_scan(lambda x: np.exp(-x), 0.0)
    assert not settles.divergent
