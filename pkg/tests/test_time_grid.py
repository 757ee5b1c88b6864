import numpy as np
import pytest
from hypothesis import given, strategies as st

from ultraparabolic.time_grid import (
    TimeGrid,
    characteristic_trace,
    diagonal_layout,
    roll_back_diagonal,
)

from oracles import march_diagonal


def test_grid_basics():
    g = TimeGrid(0.25, 50)
    assert g.omega == 0.25 / 50
    assert abs(g.omega * g.M - g.T) <= 1e-15 * g.T
    assert g.nodes[0] == 0.0 and g.nodes.size == 51
    np.testing.assert_allclose(g.midpoints, (np.arange(1, 51) - 0.5) * g.omega)
    assert g.index_of(0.125) == 25
    with pytest.raises(ValueError):
        g.index_of(0.1234)
    with pytest.raises(ValueError):
        TimeGrid(1.0, 0)


@pytest.mark.parametrize("k, m, p, foot", [
    (5, 2, 2, (3, 0)),
    (2, 5, 2, (0, 3)),
    (4, 4, 4, (0, 0)),
    (0, 3, 0, (0, 3)),
])
def test_trace(k, m, p, foot):
    tr = characteristic_trace(k, m)
    assert (tr.p, tr.foot) == (p, foot)


def test_trace_bounds():
    with pytest.raises(ValueError):
        characteristic_trace(11, 2, TimeGrid(1.0, 10))
    with pytest.raises(ValueError):
        characteristic_trace(-1, 2)


@given(st.integers(0, 60), st.integers(0, 60))
def test_trace_symmetry_and_walk(k, m):
    a, b = characteristic_trace(k, m), characteristic_trace(m, k)
    assert a.p == b.p and a.foot == b.foot[::-1]
    assert 0 in a.foot
    pts = a.visited
    assert len(pts) == a.p
    if pts:
        assert pts[-1] == (k, m)
        assert pts[0] == (a.foot[0] + 1, a.foot[1] + 1)
    assert all(q[0] == p_[0] + 1 and q[1] == p_[1] + 1 for p_, q in zip(pts, pts[1:]))


def test_roll_back_base_case():
    F = np.arange(36.0).reshape(6, 6)
    assert roll_back_diagonal(F, (3, 2), 1, 0.1, 7.0) == pytest.approx(0.1 * F[3, 2] + 7.0)


def test_roll_back_homogeneous():
    F = np.zeros((5, 5, 5))
    assert roll_back_diagonal(F, (4, 3, 4), 3, 0.5, -2.5) == -2.5


def test_roll_back_against_marching():
    rng = np.random.default_rng(7)
    F = rng.normal(size=(6, 6))
    got = roll_back_diagonal(F, (5, 4), 4, 0.2, 1.3)
    ref = march_diagonal(F, (5, 4), 4, 0.2, 1.3)
    assert got == pytest.approx(ref, rel=1e-12)


def test_roll_back_rejects_deep_p():
    with pytest.raises(ValueError):
        roll_back_diagonal(np.zeros((4, 4)), (3, 1), 2, 0.1, 0.0)
    with pytest.raises(ValueError):
        roll_back_diagonal(np.zeros(4), (3,), 1, 0.1, 0.0)


@given(st.integers(1, 30))
def test_layout_covers_interior_once(M):
    k, m, valid = diagonal_layout(M)
    pts = sorted(zip(k[valid].tolist(), m[valid].tolist()))
    assert pts == [(a, b) for a in range(1, M + 1) for b in range(1, M + 1)]
    # within a row, entries climb the diagonal
    dk = np.diff(k, axis=1)[valid[:, 1:]]
    assert np.all(dk == 1)
