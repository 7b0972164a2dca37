import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from hilbertzeta.errors import DomainError, InsufficientDecayError
from hilbertzeta.radial import RadialIntegrand, SupportHint, divergence_witness, lp_norm, mc_oracle, reduce_radial
from hilbertzeta.specfun import surface_constant


def _power_exterior(s, g, eps):
    return RadialIntegrand(s, g, lambda r: r ** (-s - eps), SupportHint.UNIT_BALL_EXTERIOR, tail_exponent=eps)


@pytest.mark.parametrize("s,g,eps", list(itertools.product((1, 2, 3), (1.0, 2.0, 3.0), (0.25, 1.0, 2.0))))
def test_truncated_power_closed_form(s, g, eps):
    res = reduce_radial(_power_exterior(s, g, eps)).require()
    assert res.value == pytest.approx(surface_constant(s, g) / eps, rel=1e-9)


@pytest.mark.parametrize("s,g", [(2, 1.0), (2, 2.0), (2, 3.0)])
def test_reduction_against_cartesian_scipy(s, g):
    # integral of exp(-||x||_g) over R_+^s by brute-force cartesian quadrature
    ri = RadialIntegrand(s, g, lambda r: np.exp(-r), left_exponent=s - 1.0, decay_rate=1.0)
    val = reduce_radial(ri).value
    f = lambda *x: math.exp(-float(lp_norm(np.array(x), g)))
    rng = [(0, np.inf)] * s
    oracle = integrate.nquad(f, rng, opts={"epsabs": 0, "epsrel": 1e-9})[0]
    assert val == pytest.approx(oracle, rel=1e-7)


def test_interior_support():
    ri = RadialIntegrand(2, 2.0, lambda r: np.ones_like(r), SupportHint.UNIT_BALL_INTERIOR)
    # quarter disc area
    assert reduce_radial(ri).value == pytest.approx(math.pi / 4, rel=1e-12)


def test_restricted_bounds():
    ri = _power_exterior(1, 1.0, 1.0).restricted(1.0, 10.0)
    assert reduce_radial(ri).value == pytest.approx(0.9, rel=1e-12)


@given(st.lists(st.floats(-10, 10), min_size=1, max_size=5), st.floats(0.3, 5.0), st.floats(0.01, 100.0))
def test_lp_norm_is_homogeneous(x, g, lam):
    x = np.array(x)
    assert lp_norm(lam * x, g) == pytest.approx(lam * lp_norm(x, g), rel=1e-12, abs=1e-300)


def test_lp_norm_extreme_magnitudes():
    assert lp_norm(np.array([1e300, 1e300]), 2.0) == pytest.approx(math.sqrt(2) * 1e300)
    assert lp_norm(np.array([1e-300, 0.0]), 2.0) == pytest.approx(1e-300)
    assert lp_norm(np.zeros(3), 2.0) == 0.0


@pytest.mark.parametrize("s,g", [(1, 1.0), (2, 2.0), (3, 3.0)])
def test_mc_oracle_agrees_with_quadrature(s, g):
    ri = _power_exterior(s, g, 2.0)
    est, se = mc_oracle(ri, 200_000, seed=7, tail_index=1.0)
    assert abs(est - surface_constant(s, g) / 2.0) <= 4 * se


def test_mc_oracle_is_reproducible():
    ri = _power_exterior(2, 2.0, 2.0)
    assert mc_oracle(ri, 50_000, seed=3, tail_index=1.0) == mc_oracle(ri, 50_000, seed=3, tail_index=1.0)
    assert mc_oracle(ri, 50_000, seed=3, tail_index=1.0) != mc_oracle(ri, 50_000, seed=4, tail_index=1.0)


@pytest.mark.parametrize("tail_index", [0.2, 3.0])
def test_mc_oracle_refuses_infinite_variance_proposal(tail_index):
    # weights grow like r^(tail_index - eps); their variance is infinite once tail_index >= 2 eps
    ri = _power_exterior(1, 1.0, 0.1)
    with pytest.raises(InsufficientDecayError):
        mc_oracle(ri, 200_000, seed=0, tail_index=tail_index)


def test_mc_oracle_flags_undeclared_heavy_tail():
    # without a declared tail only the per-stratum variance spread can tell
    ri = RadialIntegrand(1, 1.0, lambda r: r ** -1.1, SupportHint.UNIT_BALL_EXTERIOR)
    with pytest.raises(InsufficientDecayError):
        mc_oracle(ri, 200_000, seed=0, tail_index=1.0)


def test_mc_oracle_rejects_high_dimension():
    with pytest.raises(DomainError):
        mc_oracle(_power_exterior(5, 1.0, 1.0), 1000)


@pytest.mark.parametrize("s,g", [(1, 1.0), (2, 2.0), (3, 1.0)])
def test_divergence_witness_slope(s, g):
    w = divergence_witness(s, g)
    assert w.rel_deviation < 1e-9
    assert all(b > a for a, b in zip(w.partial_integrals, w.partial_integrals[1:]))


def test_integrand_validation():
    with pytest.raises(DomainError):
        RadialIntegrand(0, 1.0, lambda r: r)
    with pytest.raises(DomainError):
        RadialIntegrand(1, 0.0, lambda r: r)
