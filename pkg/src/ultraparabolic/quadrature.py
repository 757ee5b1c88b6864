"""Gauss-Legendre quadrature on the spatial interval [0, pi]."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["QuadratureRule", "gauss_legendre_rule", "integrate"]

_NEWTON_TOL = 1e-15
_NEWTON_MAXITER = 100


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes in [0, pi] and the matching weights (they sum to pi)."""

    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        if self.nodes.shape != self.weights.shape or self.nodes.ndim != 1:
            raise ValueError("nodes and weights must be 1-D arrays of equal length")
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    def __len__(self):
        return self.nodes.size

    def apply(self, values: np.ndarray) -> np.ndarray:
        """Weighted sum of samples taken at the nodes (last axis)."""
        return np.asarray(values) @ self.weights


def _legendre_with_derivative(n: int, x: np.ndarray):
    p_prev = np.ones_like(x)
    p = x.copy()
    for k in range(2, n + 1):
        p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
    dp = n * (x * p - p_prev) / (x * x - 1.0)
    return p, dp


def _legendre_roots(n: int):
    # Roots in (0, 1) only; the rule is mirrored so that symmetry is exact.
    half = (n + 1) // 2
    i = np.arange(1, half + 1)
    x = np.cos(np.pi * (i - 0.25) / (n + 0.5))
    for _ in range(_NEWTON_MAXITER):
        p, dp = _legendre_with_derivative(n, x)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) < _NEWTON_TOL:
            break
    _, dp = _legendre_with_derivative(n, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    if n % 2:
        x[-1] = 0.0
    return x, w


def gauss_legendre_rule(point_count: int) -> QuadratureRule:
    """Gauss-Legendre rule with ``point_count`` nodes mapped onto [0, pi].

    Nodes are the roots of the Legendre polynomial of degree ``point_count``,
    found by Newton iteration from the Chebyshev-like initial guesses.  With
    N nodes the rule integrates polynomials of degree 2N - 1 exactly.

    A rule indexed ``j = 0..j0`` has ``j0 + 1`` points, so ``j0 = 5`` means
    ``gauss_legendre_rule(6)``.
    """
    if int(point_count) != point_count or point_count < 1:
        raise ValueError(f"point_count must be a positive integer, got {point_count!r}")
    n = int(point_count)
    if n == 1:
        x_ref = np.array([0.0])
        w_ref = np.array([2.0])
    else:
        pos, wpos = _legendre_roots(n)
        if n % 2:
            x_ref = np.concatenate([-pos[:-1], pos[::-1]])
            w_ref = np.concatenate([wpos[:-1], wpos[::-1]])
        else:
            x_ref = np.concatenate([-pos, pos[::-1]])
            w_ref = np.concatenate([wpos, wpos[::-1]])
    half_length = np.pi / 2
    nodes = half_length * (x_ref + 1.0)
    weights = half_length * w_ref
    return QuadratureRule(nodes=nodes, weights=weights)


def integrate(f, rule: QuadratureRule) -> float:
    """Approximate the integral of ``f`` over [0, pi] as sum_j w_j f(x_j)."""
    values = np.broadcast_to(np.asarray(f(rule.nodes), dtype=float), rule.nodes.shape)
    return float(rule.apply(values))
