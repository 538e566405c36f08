import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hausdim.bounds import (
    LOG2_OVER_LOG5,
    BoundProfile1D,
    EpsilonSeries,
    cf_derivative_bound,
    cf_lipschitz_factor,
    cf_profile,
    convexity_condition_holds,
    general_profile_1d,
    perturbed_constants,
    perturbed_epsilon_series,
    perturbed_profile,
    profile_2d,
    tail_constant,
)
from hausdim.errors import ConfigurationError, InputError
from hausdim.maps import PerturbedCantor

# c_{R,s} evaluated with mpmath at 30 digits from the closed form
TAIL_ORACLE = {
    ("I1", 1.85, 100): 0.00079857083164820733,
    ("I1", 1.85, 200): 0.00023588841391088591,
    ("I1", 1.85, 300): 0.00011679429321073617,
    ("I2", 1.60, 100): 0.0055824599250068958,
    ("I2", 1.60, 200): 0.0023474985597246897,
    ("I2", 1.60, 300): 0.0014266559058467444,
}


def test_cf_derivative_bound_examples():
    assert cf_derivative_bound(0.5, 1, 1) == 1.0
    assert cf_derivative_bound(0.5, 1, 2) == 2.0
    assert cf_derivative_bound(1.0, 2, 1) == 1.0


def test_cf_derivative_bound_rejects_bad_order():
    with pytest.raises(InputError):
        cf_derivative_bound(0.5, 1, 0)
    with pytest.raises(InputError):
        cf_derivative_bound(0.5, 1, 5)


@given(st.floats(0.01, 3.0), st.floats(1.0, 100.0), st.integers(1, 4))
def test_cf_bound_is_rising_product(s, gamma, p):
    rising = math.prod(2 * s + k for k in range(p))
    assert cf_derivative_bound(s, gamma, p) * gamma**p == pytest.approx(rising, rel=1e-14)


def test_cf_lipschitz_examples():
    assert cf_lipschitz_factor(0.7, 1, 0.0) == 1.0
    assert cf_lipschitz_factor(0.5, 1, 1.0) == pytest.approx(math.e, rel=1e-15)
    assert cf_lipschitz_factor(1.0, 2, 0.5) == pytest.approx(math.exp(0.5), rel=1e-15)


def test_cf_profile_is_convex_certified():
    p = cf_profile(0.53, 1.0)
    assert p.convexity_certified and p.d2_lower == 0.0
    assert p.d2_upper == pytest.approx(2 * 0.53 * 2.06, rel=1e-15)
    assert p.log_slope == pytest.approx(1.06, rel=1e-15)


def test_profile_invariants_enforced():
    with pytest.raises(InputError):
        BoundProfile1D(1.0, 0.5, 1.0, 1.0, False)
    with pytest.raises(InputError):
        BoundProfile1D(1.0, -0.5, 1.0, 1.0, True)


def test_perturbed_constants_examples():
    assert perturbed_constants(0.0) == (0.0, 0.0, 0.0, pytest.approx(1 / 3))
    c1_left = 2.5 * 1.5 / 2.5
    c1, _, _, _ = perturbed_constants(3 / 7)
    assert c1 == pytest.approx(1.5, rel=1e-14) and c1_left == pytest.approx(1.5)
    assert perturbed_constants(1.0)[3] == pytest.approx(0.9, rel=1e-15)


@pytest.mark.parametrize("split,index", [(3 / 7, 0), (1 / 14, 1)])
def test_perturbed_constants_continuous_at_branch_points(split, index):
    left = perturbed_constants(split - 1e-13)[index]
    right = perturbed_constants(split + 1e-13)[index]
    assert left == pytest.approx(right, abs=1e-11)


@given(st.floats(0.0, 1.0))
def test_kappa_is_max_branch_slope(lam):
    _, _, m0, kappa = perturbed_constants(lam)
    x = np.linspace(0, 1, 2001)
    th = PerturbedCantor(1, lam)
    assert np.max(th.derivative(x)) == pytest.approx(kappa, rel=1e-12)
    assert np.max(th.second_derivative(x)) == pytest.approx(m0, rel=1e-12, abs=1e-15)


@given(st.floats(0.0, 1.0))
def test_epsilon_series_is_geometric_in_kappa(lam):
    kappa = perturbed_constants(lam)[3]
    eps = perturbed_epsilon_series(lam)
    geo = EpsilonSeries.geometric(kappa)
    assert eps.sum_eps == pytest.approx(geo.sum_eps, rel=1e-13)
    assert eps.sum_eps_sq == pytest.approx(geo.sum_eps_sq, rel=1e-13)


def test_epsilon_series_validation():
    with pytest.raises(InputError):
        EpsilonSeries(0.5, 1.0)
    with pytest.raises(InputError):
        EpsilonSeries.geometric(1.0)


def test_perturbed_profile_unperturbed_is_flat():
    p = perturbed_profile(0.63, 0.0)
    assert p.d2_upper == 0.0 and p.log_slope == 0.0 and p.convexity_certified


def test_perturbed_profile_regression_constant():
    # hand-evaluated with mpmath from C1, C2, M0 at lambda=1, s=0.8
    p = perturbed_profile(0.8, 1.0)
    assert p.d2_upper == pytest.approx(464.82009716054301, rel=1e-13)
    assert p.d1_abs == pytest.approx(16.841158381406577, rel=1e-13)
    pub = perturbed_profile(0.8, 1.0, convention="published")
    assert pub.d2_upper / 2 == pytest.approx(209.55794309568412, rel=1e-13)


def test_perturbed_profile_domain():
    with pytest.raises(InputError):
        perturbed_profile(0.3, 0.5)
    with pytest.raises(ConfigurationError):
        perturbed_profile(0.7, 0.5, convention="other")
    perturbed_profile(LOG2_OVER_LOG5, 0.5)


def test_convexity_certified_example():
    assert convexity_condition_holds(0.5, 0.7)
    assert perturbed_profile(0.7, 0.5).convexity_certified


def test_general_profile_examples():
    eps = EpsilonSeries(2.0, 4.0 / 3.0)
    zero = general_profile_1d(0.0, 0.0, 0.0, eps, 1.0)
    assert (zero.d1_abs, zero.d2_lower, zero.d2_upper) == (0.0, 0.0, 0.0)
    p = general_profile_1d(1.0, 0.0, 0.0, eps, 1.0)
    assert p.d1_abs == 2.0
    assert p.d2_upper == pytest.approx(4.0 + 0.0)
    assert p.d2_lower == pytest.approx(-4.0 / 3.0)


@given(st.floats(0.0, 1.0), st.floats(LOG2_OVER_LOG5, 1.0))
def test_general_profile_matches_perturbed_profile(lam, s):
    c1, c2, m0, _ = perturbed_constants(lam)
    g = general_profile_1d(c1, c2, m0, perturbed_epsilon_series(lam), s,
                           convexity_certified=convexity_condition_holds(lam, s))
    p = perturbed_profile(s, lam)
    assert g.d2_upper == pytest.approx(p.d2_upper, rel=1e-12, abs=1e-300)
    assert g.d1_abs == pytest.approx(p.d1_abs, rel=1e-12, abs=1e-300)
    assert g.d2_lower == p.d2_lower


def test_profile_2d_at_s_one():
    p = profile_2d(1.0, 1.0)
    assert p.dxx_lower == pytest.approx(-1 / 8)
    assert p.dxx_upper == pytest.approx(6.0)
    assert p.dyy_lower == pytest.approx(-2.0)
    assert p.dyy_upper == pytest.approx(1.5)
    assert profile_2d(1.85).log_slope == pytest.approx(math.sqrt(5) * 1.85, rel=1e-15)


def test_profile_2d_vanishes_as_s_to_zero():
    p = profile_2d(1e-12)
    for v in (p.dxx_lower, p.dxx_upper, p.dyy_lower, p.dyy_upper, p.log_slope):
        assert abs(v) < 1e-10


@given(st.floats(0.01, 2.0), st.floats(1.0, 10.0))
def test_profile_2d_sign_pattern(s, gamma):
    p = profile_2d(s, gamma)
    assert p.dxx_lower <= 0 <= p.dxx_upper
    assert p.dyy_lower <= 0 <= p.dyy_upper
    for axis in ("x", "y"):
        for lo, hi in p.derivative_bounds[axis].values():
            assert lo <= 0 <= hi


@pytest.mark.parametrize("key", sorted(TAIL_ORACLE))
def test_tail_constant_matches_closed_form(key):
    kind, s, R = key
    assert tail_constant(kind, s, R) == pytest.approx(TAIL_ORACLE[key], rel=1e-13)


def test_tail_constant_printed_values_that_agree():
    # five of the six published six-decimal values round correctly
    assert round(tail_constant("I1", 1.85, 300), 6) == 0.000117
    assert round(tail_constant("I2", 1.60, 200), 6) == 0.002347


def test_tail_constant_domain():
    with pytest.raises(InputError):
        tail_constant("I1", 1.0, 100)
    with pytest.raises(ConfigurationError):
        tail_constant("I1", 1.5, 2.5)
    with pytest.raises(ConfigurationError):
        tail_constant("I3", 1.5, 100)


@given(st.sampled_from(["I1", "I2"]), st.floats(1.05, 2.0), st.floats(3.0, 500.0))
def test_tail_constant_decreasing_in_R(kind, s, R):
    assert tail_constant(kind, s, R + 1.0) < tail_constant(kind, s, R)


@given(st.sampled_from(["I1", "I2"]), st.floats(1.05, 1.95), st.floats(3.0, 500.0))
def test_tail_constant_continuous_in_s(kind, s, R):
    a, b = tail_constant(kind, s, R), tail_constant(kind, s + 1e-9, R)
    assert abs(a - b) <= 1e-6 * a


@pytest.mark.parametrize("kind,s,R", [("I1", 1.85, 10.0), ("I2", 1.6, 12.0)])
def test_tail_constant_bounds_partial_tail_sum(kind, s, R):
    # sum over R < |b| <= 8R at a few points of the half disk
    M = int(8 * R)
    m, n = np.meshgrid(np.arange(1, M + 1), np.arange(-M if kind == "I1" else 0, M + 1))
    b = (m + 1j * n).ravel()
    b = b[(np.abs(b) > R) & (np.abs(b) <= 8 * R)]
    c = tail_constant(kind, s, R)
    for z in (0.0, 0.5 + 0.5j, 1.0, 0.25 + 0.4j):
        assert np.sum(np.abs(z + b) ** (-2 * s)) <= c
