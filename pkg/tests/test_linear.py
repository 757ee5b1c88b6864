import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ultraparabolic.linear import (
    CompatibilityError,
    LinearProblem,
    attenuation,
    characteristic_solve,
    solve_linear,
    stability_bound_check,
)
from ultraparabolic.spectrum import BasisKind, make_basis
from ultraparabolic.time_grid import TimeGrid

from oracles import march_single_mode, single_mode_problem


def test_marching_oracle_random_single_modes():
    rng = np.random.default_rng(20240611)
    kinds = list(BasisKind)
    for trial in range(50):
        kind = kinds[trial % 4]
        n = int(rng.integers(1, 6))
        M = int(rng.integers(1, 13))
        T = float(rng.uniform(0.1, 1.0))
        coef = rng.uniform(-2, 2, size=5)
        prob, a, b, c = single_mode_problem(kind, n, T, M, coef)
        field = solve_linear(prob)
        lam = prob.basis.eigenvalue(n)
        ref = march_single_mode(lam, T, M, a, b, c)
        got = field.coeffs[field.modes.index(n)]
        np.testing.assert_allclose(got, ref, rtol=1e-12, atol=1e-12,
                                   err_msg=f"trial {trial}: {kind}, n={n}, M={M}")
        others = np.delete(field.coeffs, field.modes.index(n), axis=0)
        assert np.abs(others).max(initial=0.0) < 1e-12


def test_single_cell_closed_form():
    # M = 1: u[1,1] = omega F + exp(-lam omega) alpha(0)
    lam, omega = 4.0, 0.5
    out = characteristic_solve(lam, omega, np.array([[3.0]]), np.array([1.0, 2.0]),
                               np.array([1.0, 5.0]))
    assert out[1, 1] == pytest.approx(omega * 3.0 + math.exp(-lam * omega) * 1.0, rel=1e-15)
    assert out[0, 1] == 2.0 and out[1, 0] == 5.0


def test_feet_by_side():
    lam, omega, M = 1.0, 0.1, 4
    alpha = np.arange(M + 1, dtype=float) + 10
    beta = np.arange(M + 1, dtype=float) + 20
    beta[0] = alpha[0]
    out = characteristic_solve(lam, omega, np.zeros((M, M)), alpha, beta)
    # k > m traces to beta, m > k to alpha, the diagonal to the corner
    assert out[4, 1] == pytest.approx(math.exp(-lam * omega) * beta[3])
    assert out[1, 3] == pytest.approx(math.exp(-lam * omega) * alpha[2])
    assert out[3, 3] == pytest.approx(math.exp(-3 * lam * omega) * alpha[0])


def test_attenuation():
    assert attenuation(9.0, 0.0) == 1.0
    assert attenuation(2.0, 1.0) == pytest.approx(math.exp(-1.0))
    big = attenuation(1e6, np.array([0.0, 1.0, 10.0]))
    assert np.all(np.isfinite(big)) and np.all(big <= 1.0)
    with pytest.raises(ValueError):
        attenuation(1.0, -0.1)


def test_zero_data_gives_zero():
    basis = make_basis(BasisKind.DD, 8)
    zero2 = lambda x, tau: np.zeros_like(x * tau)
    prob = LinearProblem(basis, TimeGrid(1.0, 10), zero2, zero2,
                         lambda x, t, s: np.zeros_like(x * t * s))
    field = solve_linear(prob)
    assert np.all(field.coeffs == 0.0)


def test_incompatible_corner_rejected():
    basis = make_basis(BasisKind.DD, 4)
    prob = LinearProblem(basis, TimeGrid(1.0, 4),
                         alpha=lambda x, s: np.sin(x) * (1 + s),
                         beta=lambda x, t: 2 * np.sin(x) + 0 * t,
                         source=lambda x, t, s: 0 * x)
    with pytest.raises(CompatibilityError):
        solve_linear(prob)


def test_large_eigenvalues_stay_finite():
    # lambda_n * T ~ 4e4: naive exp(lambda (t+s)/2) overflows, attenuation must not.
    basis = make_basis(BasisKind.DD, 200)
    prob = LinearProblem(basis, TimeGrid(1.0, 20),
                         alpha=lambda x, s: np.sin(200 * x) + 0 * s,
                         beta=lambda x, t: np.sin(200 * x) + 0 * t,
                         source=lambda x, t, s: np.sin(200 * x) + 0 * t * s)
    field = solve_linear(prob)
    assert np.all(np.isfinite(field.coeffs))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(list(BasisKind)), st.integers(1, 5), st.integers(1, 10),
       st.floats(0.05, 2.0), st.lists(st.floats(-3, 3), min_size=5, max_size=5))
def test_stability_bound_property(kind, n, M, T, coef):
    prob, *_ = single_mode_problem(kind, n, T, M, coef)
    report = stability_bound_check(solve_linear(prob), prob)
    assert report.holds, report


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 8), st.floats(0.1, 1.0), st.lists(st.floats(-3, 3), min_size=5, max_size=5),
       st.floats(-3, 3))
def test_linearity(M, T, coef, scale):
    prob, *_ = single_mode_problem(BasisKind.DD, 2, T, M, coef)
    base = solve_linear(prob).coeffs
    scaled = LinearProblem(prob.basis, prob.grid,
                           alpha=lambda x, s: scale * prob.alpha(x, s),
                           beta=lambda x, t: scale * prob.beta(x, t),
                           source=lambda x, t, s: scale * prob.source(x, t, s))
    np.testing.assert_allclose(solve_linear(scaled).coeffs, scale * base, atol=1e-12)
