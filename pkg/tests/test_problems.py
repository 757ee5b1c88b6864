import numpy as np
import pytest

from ultraparabolic.linear import LinearProblem
from ultraparabolic.nonlinear import NonlinearProblem
from ultraparabolic.problems import EXAMPLES, REFERENCE_TABLES, get_example, run_example
from ultraparabolic.spectrum import BasisKind, make_basis

H = 1e-5


def residual(ex, x, t, s):
    """``u_t + u_s - u_xx + (lambda - frequency^2) u - f`` at the exact solution."""
    u = ex.exact
    basis = make_basis(ex.kind, 8)
    shift = basis.eigenvalue(1) - basis.frequency(1) ** 2
    ut = (u(x, t + H, s) - u(x, t - H, s)) / (2 * H)
    us = (u(x, t, s + H) - u(x, t, s - H)) / (2 * H)
    uxx = (u(x + H, t, s) - 2 * u(x, t, s) + u(x - H, t, s)) / H ** 2
    ue = u(x, t, s)
    if ex.is_linear:
        f = ex.source(x, t, s)
    else:
        f = ex.source_form(ue, x, t, s) + ex.forcing(x, t, s)
    return ut + us - uxx + shift * ue - f


@pytest.mark.parametrize("ex_id", [1, 2, 3, 4])
def test_manufactured_sources(ex_id):
    ex = get_example(ex_id)
    rng = np.random.default_rng(ex_id)
    x = rng.uniform(0.2, 2.9, 30)
    t = rng.uniform(0.1, 0.9, 30) * ex.T
    s = rng.uniform(0.1, 0.9, 30) * ex.T
    scale = np.max(np.abs(ex.exact(x, t, s)))
    assert np.max(np.abs(residual(ex, x, t, s))) < 1e-4 * max(scale, 1.0)


@pytest.mark.parametrize("ex_id", [1, 2, 3, 4])
def test_initial_data_are_exact_slices(ex_id):
    ex = get_example(ex_id)
    x = np.linspace(0, np.pi, 9)
    tau = 0.37 * ex.T
    np.testing.assert_array_equal(ex.alpha(x, tau), ex.exact(x, 0.0, tau))
    np.testing.assert_array_equal(ex.beta(x, tau), ex.exact(x, tau, 0.0))


def test_printed_initial_data():
    x = np.linspace(0, np.pi, 7)
    s = 0.3
    np.testing.assert_allclose(get_example(1).alpha(x, s), np.exp(-s) * np.sin(x))
    np.testing.assert_allclose(get_example(1).beta(x, s), np.exp(-2 * s) * np.sin(x))
    np.testing.assert_allclose(get_example(2).alpha(x, s), (s ** 2 + 32) * np.cos(x / 2))
    np.testing.assert_allclose(get_example(3).alpha(x, s),
                               0.25 * (1 + np.exp(-s)) * np.sin(3.5 * x))
    np.testing.assert_allclose(get_example(4).alpha(x, s), (1 + np.exp(-s)) * np.cos(3 * x))
    np.testing.assert_allclose(get_example(4).beta(x, s), (np.sin(s) + 2) * np.cos(3 * x))


def test_registry_entries():
    expected = {1: (BasisKind.DD, 1.0), 2: (BasisKind.ND, 1.0),
                3: (BasisKind.DN_SHIFT1, 0.25), 4: (BasisKind.NN_SHIFT2, 0.1)}
    for ex_id, (kind, T) in expected.items():
        ex = EXAMPLES[ex_id]
        assert (ex.kind, ex.T) == (kind, T)
    assert EXAMPLES[3].source_form.lipschitz == 0.25
    assert EXAMPLES[4].source_form.lipschitz == 1.0
    with pytest.raises(KeyError):
        get_example(7)


def test_exact_solutions_in_active_mode():
    # Examples 3-4 live in mode 3 of their bases.
    for ex_id in (3, 4):
        ex = get_example(ex_id)
        basis = make_basis(ex.kind, 8)
        x = np.linspace(0, np.pi, 11)
        ratio = ex.exact(x[1:-1], 0.1, 0.05) / basis.phi(3, x[1:-1])
        np.testing.assert_allclose(ratio, ratio[0], rtol=1e-12)


def test_problem_types_and_defaults():
    assert isinstance(get_example(1).problem(10), LinearProblem)
    nl = get_example(3).problem(10)
    assert isinstance(nl, NonlinearProblem) and nl.grid.T == 0.25
    assert get_example(3).default_q(200) == 4
    assert get_example(3).default_q(30) == 5
    assert get_example(1).default_q(50) is None
    assert get_example(4).reference(400, 5) == (6.69222399e-04, 1.85315435e-03)


def test_reference_tables_shape():
    for ex_id, rows in REFERENCE_TABLES.items():
        assert [r[1] for r in rows] == [50, 100, 200, 400]
        for _, _, l2, linf in rows:
            assert l2 <= linf


def test_run_example_records_parameters():
    run = run_example(4, 50, q=3, j0=5)
    assert (run.error.M, run.error.L, run.error.q, run.error.j0) == (50, 20, 3, 5)
    assert run.report.q == 3
    assert run.field.modes == (3,)


def test_linear_run_has_no_report():
    run = run_example(2, 20)
    assert run.report is None and run.error.q is None
