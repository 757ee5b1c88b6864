import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ultraparabolic.quadrature import gauss_legendre_rule, integrate


@pytest.mark.parametrize("n", [1, 2, 3, 6, 7, 16, 64, 255])
def test_matches_numpy_leggauss(n):
    rule = gauss_legendre_rule(n)
    x, w = np.polynomial.legendre.leggauss(n)
    np.testing.assert_allclose(rule.nodes, (x + 1) * np.pi / 2, atol=1e-14)
    np.testing.assert_allclose(rule.weights, w * np.pi / 2, atol=1e-13)


def test_six_point_rule():
    rule = gauss_legendre_rule(6)
    assert len(rule) == 6
    assert abs(rule.weights.sum() - math.pi) < 1e-12
    assert abs(integrate(lambda x: x, rule) - math.pi ** 2 / 2) < 1e-12
    assert abs(integrate(np.sin, rule) - 2.0) < 1e-6
    assert abs(integrate(np.sin, rule) - integrate(np.sin, gauss_legendre_rule(64))) < 1e-6


def test_rejects_empty_rule():
    with pytest.raises(ValueError):
        gauss_legendre_rule(0)
    with pytest.raises(ValueError):
        gauss_legendre_rule(2.5)


def test_integrate_constants():
    rule = gauss_legendre_rule(6)
    assert integrate(lambda x: 0.0, rule) == 0.0
    assert abs(integrate(lambda x: 1.0, rule) - math.pi) < 1e-12


def test_oscillatory_nonlinear_integrand_against_reference():
    # 6-point error for this profile is 8.4e-5 (256-point reference).
    def integrand(x):
        u = 0.25 * np.sin(3.5 * x)
        return np.sin(u) * np.sin(3.5 * x)

    coarse = integrate(integrand, gauss_legendre_rule(6))
    fine = integrate(integrand, gauss_legendre_rule(256))
    assert abs(coarse - fine) < 1e-4


@given(st.integers(min_value=1, max_value=40))
def test_polynomial_exactness(n):
    rule = gauss_legendre_rule(n)
    deg = 2 * n - 1
    # integral over [0, pi] of ((2x/pi) - 1)^j, i.e. the monomial on [-1, 1] mapped.
    for j in (0, deg // 2, deg):
        exact = 0.0 if j % 2 else math.pi / (j + 1)
        got = integrate(lambda x: (2 * x / math.pi - 1) ** j, rule)
        assert abs(got - exact) < 1e-10


@given(st.integers(min_value=1, max_value=80))
def test_symmetry_about_midpoint(n):
    rule = gauss_legendre_rule(n)
    np.testing.assert_allclose(rule.nodes + rule.nodes[::-1], np.pi, atol=1e-13)
    np.testing.assert_allclose(rule.weights, rule.weights[::-1], atol=1e-13)
    assert np.all((rule.nodes > 0) & (rule.nodes < np.pi))
