import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from movebound.errors import DomainExceededError, GrowthOverflowError
from movebound.phi_ode import (
    EXAMPLE32_INIT,
    PhiSpec,
    SecondOrder,
    ThirdOrderCubic,
    cubic_phi,
    phi_example32,
    phi_higher_derivs,
    solve_phi,
)
from movebound.special import AI0, AIP0, airy_ai

C = 5.0 ** (-0.6)


def _mp_phi(x):
    with mpmath.workdps(40):
        x = mpmath.mpf(x)
        return float(x * mpmath.mpf(5) ** mpmath.mpf(-0.6)
                     * mpmath.hyper([], [mpmath.mpf(4) / 5, mpmath.mpf(6) / 5], -x ** 5 / 125,
                                    maxterms=10 ** 6))


def test_linear_phi():
    sol = solve_phi(PhiSpec(SecondOrder(), (0.0, 1.0)), (-10, 10))
    x = np.linspace(-10, 10, 101)
    assert np.max(np.abs(sol(x) - x)) < 1e-12


def test_cosh_phi():
    sol = solve_phi(PhiSpec(SecondOrder(c0=1.0), (1.0, 0.0)), (-10, 10))
    assert sol(2.0) == pytest.approx(math.cosh(2.0), abs=1e-10)
    assert sol(-3.5) == pytest.approx(math.cosh(3.5), rel=1e-11)


def test_airy_phi_matches_airy_module():
    sol = solve_phi(PhiSpec(SecondOrder(c1=1.0), (AI0, AIP0)), (-5, 5))
    x = np.linspace(-3, 3, 61)
    assert np.max(np.abs(sol(x) - airy_ai(x))) < 1e-9


def test_cubic_phi_matches_series():
    sol = cubic_phi(-1.0)
    x = np.linspace(-6, 6, 121)
    ref = np.array([_mp_phi(v) for v in x])
    assert np.max(np.abs(sol(x) - ref) / (1 + np.abs(ref))) < 1e-10


def test_series_form_against_mpmath():
    for x in [-6.0, -2.5, 0.3, 1.0, 4.0, 6.0]:
        assert phi_example32(x) == pytest.approx(_mp_phi(x), rel=1e-12, abs=1e-15)


def test_series_form_values():
    assert phi_example32(0.0) == 0.0
    assert phi_example32(1.0) + phi_example32(-1.0) != 0.0
    # 20-term oracle at x = 1
    z = -0.008
    ref = sum(z ** k / (math.gamma(0.8 + k) / math.gamma(0.8) * math.gamma(1.2 + k)
                        / math.gamma(1.2) * math.factorial(k)) for k in range(20))
    assert phi_example32(1.0) == pytest.approx(C * ref, rel=1e-15)


def _richardson_d1(func, x, h):
    def cd(step):
        return (func(x + step) - func(x - step)) / (2 * step)
    return (4 * cd(h / 2) - cd(h)) / 3


def test_cubic_ode_residual_exact_by_construction():
    sol = cubic_phi(-1.0)
    x = np.linspace(-40, 40, 4001)
    d = sol.derivs(x, 3)
    assert np.max(np.abs(d[3] + x * x * d[0]) / (1 + np.abs(d[0]))) < 1e-9


def test_cubic_interpolant_self_consistent():
    # derivative of the interpolated phi'' against b2 x^2 phi across the domain
    sol = cubic_phi(-1.0)
    x = np.linspace(-39.5, 39.5, 317)
    third = _richardson_d1(lambda v: sol.derivs(v, 2)[2], x, 1e-3)
    target = -x * x * sol(x)
    assert np.max(np.abs(third - target) / (1 + np.abs(target))) < 1e-8


def test_higher_derivatives_at_origin():
    d = phi_higher_derivs(cubic_phi(-1.0), 0.0, 3)
    np.testing.assert_allclose(d, [0.0, C, 0.0, 0.0], atol=1e-15)


def test_fourth_derivative_cubic():
    sol = cubic_phi(-1.0)
    d = sol.derivs(1.0, 4)
    assert d[4] == pytest.approx(-1.0 * (2 * d[0] + d[1]), rel=1e-14)


def test_third_derivative_second_order():
    fam = SecondOrder(0.3, -0.2, 0.5, 0.1, -0.05)
    sol = solve_phi(PhiSpec(fam, (1.0, 0.4)), (-5, 5))
    x = 1.3
    d = sol.derivs(x, 3)
    expected = ((fam.d0 + fam.d1 * x) * d[2]
                + (fam.d1 + fam.c0 + fam.c1 * x + fam.c2 * x * x) * d[1]
                + (fam.c1 + 2 * fam.c2 * x) * d[0])
    assert d[3] == pytest.approx(expected, rel=1e-13)


def test_higher_derivatives_against_differences():
    sol = cubic_phi(-1.0)
    for x in [-2.0, 0.2, 1.7]:
        d = sol.derivs(x, 6)
        for k in (4, 5, 6):
            fd = _richardson_d1(lambda v: sol.derivs(v, k - 1)[k - 1], x, 1e-2)
            assert fd == pytest.approx(d[k], rel=1e-8, abs=1e-9)


def test_tighter_integration_agrees():
    spec = PhiSpec(ThirdOrderCubic(-1.0), EXAMPLE32_INIT)
    a = solve_phi(spec, (-15, 15))
    b = solve_phi(spec, (-15, 15), rtol=1e-13, atol=1e-16)
    x = np.linspace(-15, 15, 301)
    va, vb = a(x), b(x)
    assert np.max(np.abs(va - vb) / (1 + np.abs(vb))) < 1e-10


def test_b2_scaling():
    # phi_b2(x) = alpha * phi_{-1}(x / alpha) with alpha = (-1/b2)^(1/5)
    for b2 in (-8.0, -0.3):
        alpha = (-1.0 / b2) ** 0.2
        sol = cubic_phi(b2)
        x = np.linspace(-4, 4, 41)
        np.testing.assert_allclose(sol(x), alpha * cubic_phi(-1.0)(x / alpha), rtol=1e-9, atol=1e-12)


def test_domain_errors():
    sol = cubic_phi(-1.0)
    with pytest.raises(DomainExceededError):
        sol(41.0)
    with pytest.raises(ValueError):
        sol.derivs(0.0, 7)
    with pytest.raises(ValueError):
        solve_phi(PhiSpec(ThirdOrderCubic(-1.0), EXAMPLE32_INIT), (1.0, 5.0))
    with pytest.raises(ValueError):
        solve_phi(PhiSpec(ThirdOrderCubic(-1.0), EXAMPLE32_INIT), (-70.0, 5.0))


def test_spec_validation():
    with pytest.raises(ValueError):
        PhiSpec(SecondOrder(), (1.0, 0.0, 0.0))
    with pytest.raises(ValueError):
        ThirdOrderCubic(0.0)


def test_growth_overflow():
    with pytest.raises(GrowthOverflowError):
        solve_phi(PhiSpec(SecondOrder(c2=40.0), (1.0, 0.0)), (-60, 60))


@settings(max_examples=25, deadline=None)
@given(c0=st.floats(-1, 1), c1=st.floats(-1, 1), d0=st.floats(-1, 1))
def test_wronskian_constancy(c0, c1, d0):
    # with d1 = 0, W' = d0 W, so W(x) e^{-d0 x} is constant
    fam = SecondOrder(d0=d0, c0=c0, c1=c1)
    u = solve_phi(PhiSpec(fam, (1.0, 0.0)), (-4, 4))
    v = solve_phi(PhiSpec(fam, (0.0, 1.0)), (-4, 4))
    x = np.linspace(-4, 4, 41)
    du, dv = u.derivs(x, 1), v.derivs(x, 1)
    a, b = du[0] * dv[1], du[1] * dv[0]
    w = (a - b) * np.exp(-d0 * x)
    scale = (np.abs(a) + np.abs(b)) * np.exp(-d0 * x)
    assert np.max(np.abs(w - 1.0) / (1 + scale)) < 1e-10


@settings(max_examples=25, deadline=None)
@given(a=st.floats(-2, 2), b=st.floats(-2, 2))
def test_linearity_in_initial_data(a, b):
    fam = ThirdOrderCubic(-1.0)
    x = np.linspace(-6, 6, 25)
    e1 = solve_phi(PhiSpec(fam, (1.0, 0.0, 0.0)), (-6, 6))(x)
    e2 = solve_phi(PhiSpec(fam, (0.0, 1.0, 0.0)), (-6, 6))(x)
    combo = solve_phi(PhiSpec(fam, (a, b, 0.0)), (-6, 6))(x)
    ref = a * e1 + b * e2
    scale = 1 + np.abs(a * e1) + np.abs(b * e2)
    assert np.max(np.abs(combo - ref) / scale) < 1e-10
