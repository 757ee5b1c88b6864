"""Explicit discrete solution of the linear problem u_t + u_s + L u = f.

Per mode n the integrating factor ``exp(lambda_n (t + s) / 2)`` turns the
equation into pure transport along ``t = s + const``.  Every lattice point is
then a weighted sum of the source along its characteristic plus the
attenuated initial value at the foot.  All weights are evaluated as
``attenuation(lambda_n, displacement) <= 1`` so nothing overflows.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .quadrature import QuadratureRule, gauss_legendre_rule
from .spectrum import EigenBasis, project
from .time_grid import TimeGrid, diagonal_layout

__all__ = [
    "CompatibilityError",
    "SpectralField",
    "LinearProblem",
    "BoundReport",
    "attenuation",
    "characteristic_solve",
    "solve_linear",
    "stability_bound_check",
    "default_projection_rule",
]

COMPATIBILITY_TOL = 1e-10


class CompatibilityError(ValueError):
    """Initial data disagree at the corner ``t = s = 0``."""


@dataclass
class SpectralField:
    """Mode coefficients on the full lattice, ``coeffs[i, k, m]`` for mode ``modes[i]``.

    Slices ``k = 0`` and ``m = 0`` hold the projected initial data.
    """

    basis: EigenBasis
    grid: TimeGrid
    modes: tuple[int, ...]
    coeffs: np.ndarray

    def __post_init__(self):
        M = self.grid.M
        if self.coeffs.shape != (len(self.modes), M + 1, M + 1):
            raise ValueError(f"coeffs shape {self.coeffs.shape} does not match "
                             f"{len(self.modes)} modes on an M={M} lattice")

    @property
    def n_max(self) -> int:
        return max(self.modes, default=0)

    def coeff(self, n: int, k: int, m: int) -> float:
        return float(self.coeffs[self.modes.index(n), k, m])

    def norm_sq(self) -> np.ndarray:
        """Squared H-norm at each lattice point (Parseval over the stored modes)."""
        return np.einsum("nkm,nkm->km", self.coeffs, self.coeffs)

    def values(self, xs) -> np.ndarray:
        """Physical samples, shape ``(len(xs), M + 1, M + 1)``."""
        phi = self.basis.evaluate(xs, self.modes)
        return np.einsum("nj,nkm->jkm", phi, self.coeffs)

    def interior_sup_norm_sq(self) -> float:
        return float(self.norm_sq()[1:, 1:].max())


@dataclass
class LinearProblem:
    """Linear data: ``alpha(x, s) = u(x, 0, s)``, ``beta(x, t) = u(x, t, 0)`` and ``source(x, t, s)``.

    All callables must broadcast over numpy arrays.
    """

    basis: EigenBasis
    grid: TimeGrid
    alpha: Callable
    beta: Callable
    source: Callable

    def check_compatibility(self, rule: QuadratureRule | None = None, tol=COMPATIBILITY_TOL):
        xs = _check_points(rule)
        gap = np.max(np.abs(_eval2(self.alpha, xs, 0.0) - _eval2(self.beta, xs, 0.0)))
        if gap > tol:
            raise CompatibilityError(f"alpha(x, 0) and beta(x, 0) differ by {gap:.3e}")


@dataclass(frozen=True)
class BoundReport:
    lhs: float
    rhs: float
    holds: bool


def attenuation(lambda_n, dt_sum):
    """``exp(-lambda_n * dt_sum / 2)``: the ratio of integrating factors across a
    backward displacement ``dt_sum >= 0`` (summed over both time axes)."""
    dt_sum = np.asarray(dt_sum, dtype=float)
    if np.any(dt_sum < 0):
        raise ValueError("displacement must be nonnegative")
    out = np.exp(-0.5 * lambda_n * dt_sum)
    return float(out) if out.ndim == 0 else out


def default_projection_rule(n_max: int) -> QuadratureRule:
    return gauss_legendre_rule(max(64, 2 * n_max + 8))


def characteristic_solve(lambda_n: float, omega: float, cell_sources: np.ndarray,
                         alpha_coeffs: np.ndarray, beta_coeffs: np.ndarray) -> np.ndarray:
    """Coefficient plane of one mode on the whole lattice.

    Parameters
    ----------
    lambda_n : float
        Eigenvalue of the mode.
    omega : float
        Time step.
    cell_sources : ndarray, shape (M, M)
        Source coefficient attached to lattice point ``(k, m)``, stored at
        ``[k - 1, m - 1]``; the caller decides where it was sampled.
    alpha_coeffs, beta_coeffs : ndarray, shape (M + 1,)
        Initial data coefficients ``alpha_n(s_m)`` and ``beta_n(t_k)``.

    Returns
    -------
    ndarray, shape (M + 1, M + 1)
        For ``k, m >= 1`` with ``p = min(k, m)``::

            u[k, m] = omega * sum_{l=1..p} A(2 (p - l) omega) F[k-p+l, m-p+l]
                      + A(2 p omega) * foot_value

        where ``A`` is :func:`attenuation`.  The foot value is ``beta`` for
        ``k > m`` and ``alpha`` otherwise (they coincide at the corner).
    """
    M = cell_sources.shape[0]
    k, m, valid = diagonal_layout(M)
    lag = np.subtract.outer(np.arange(M), np.arange(M))
    weights = np.where(lag >= 0, attenuation(lambda_n, 2.0 * omega * np.maximum(lag, 0)), 0.0)

    packed = np.where(valid, cell_sources[k - 1, m - 1], 0.0)
    # Row p of ``weights`` sums l = 1..p in ascending order.
    summed = omega * (packed @ weights.T)

    offsets = np.arange(-(M - 1), M)
    foot = np.where(offsets > 0, beta_coeffs[np.clip(offsets, 0, M)],
                    alpha_coeffs[np.clip(-offsets, 0, M)])
    decay = attenuation(lambda_n, 2.0 * omega * np.arange(1, M + 1))
    packed_u = summed + foot[:, None] * decay[None, :]

    out = np.empty((M + 1, M + 1))
    out[0, :] = alpha_coeffs
    out[:, 0] = beta_coeffs
    out[k[valid], m[valid]] = packed_u[valid]
    return out


def _eval2(func, xs, time):
    return np.broadcast_to(np.asarray(func(xs, time), dtype=float), np.shape(xs))


def _check_points(rule):
    pts = np.linspace(0.0, np.pi, 33)
    return pts if rule is None else np.concatenate([pts, rule.nodes])


def initial_coefficients(func, basis: EigenBasis, grid: TimeGrid, rule: QuadratureRule,
                         modes: Sequence[int]) -> np.ndarray:
    """Coefficients of ``func(x, tau)`` at every lattice time, shape ``(len(modes), M + 1)``."""
    x = rule.nodes[None, :]
    tau = grid.nodes[:, None]
    samples = np.broadcast_to(np.asarray(func(x, tau), dtype=float), (grid.M + 1, len(rule)))
    return project(samples, basis, rule, modes).T


def cell_coefficients(func, basis: EigenBasis, times: np.ndarray, rule: QuadratureRule,
                      modes: Sequence[int]) -> np.ndarray:
    """Coefficients of ``func(x, t_a, s_b)`` on a tensor grid of times, shape ``(len(modes), M, M)``."""
    x = rule.nodes[None, None, :]
    t = times[:, None, None]
    s = times[None, :, None]
    samples = np.broadcast_to(np.asarray(func(x, t, s), dtype=float),
                              (times.size, times.size, len(rule)))
    return np.moveaxis(project(samples, basis, rule, modes), -1, 0)


def solve_linear(problem: LinearProblem, n_max: int | None = None,
                 rule: QuadratureRule | None = None) -> SpectralField:
    """Discrete solution of the linear problem on the first ``n_max`` modes.

    The source is sampled at cell centres ``(t_k - omega/2, s_m - omega/2)``;
    initial data at lattice nodes.  ``rule`` is used for every projection and
    defaults to a Gauss-Legendre rule with ``max(64, 2 n_max + 8)`` points.
    """
    basis, grid = problem.basis, problem.grid
    n_max = basis.n_max if n_max is None else n_max
    if not 1 <= n_max <= basis.n_max:
        raise ValueError(f"n_max must lie in 1..{basis.n_max}")
    rule = default_projection_rule(n_max) if rule is None else rule
    problem.check_compatibility(rule)
    modes = tuple(range(1, n_max + 1))

    alpha_c = initial_coefficients(problem.alpha, basis, grid, rule, modes)
    beta_c = initial_coefficients(problem.beta, basis, grid, rule, modes)
    src_c = cell_coefficients(problem.source, basis, grid.midpoints, rule, modes)

    coeffs = np.empty((len(modes), grid.M + 1, grid.M + 1))
    for i, n in enumerate(modes):
        coeffs[i] = characteristic_solve(basis.eigenvalue(n), grid.omega, src_c[i],
                                         alpha_c[i], beta_c[i])
    return SpectralField(basis=basis, grid=grid, modes=modes, coeffs=coeffs)


def sup_sq_norm_over_times(func, times_t, times_s, rule: QuadratureRule) -> float:
    """``max ||func(., t, s)||^2`` over a tensor grid of times, by quadrature in x."""
    x = rule.nodes[None, None, :]
    vals = np.broadcast_to(np.asarray(func(x, times_t[:, None, None], times_s[None, :, None]),
                                      dtype=float),
                           (times_t.size, times_s.size, len(rule)))
    return float((vals ** 2 @ rule.weights).max())


def sup_sq_norm_over_edge(func, times, rule: QuadratureRule) -> float:
    """``max ||func(., tau)||^2`` for tau in ``times``."""
    vals = np.broadcast_to(np.asarray(func(rule.nodes[None, :], times[:, None]), dtype=float),
                           (times.size, len(rule)))
    return float((vals ** 2 @ rule.weights).max())


def stability_bound_check(field: SpectralField, problem: LinearProblem,
                          rule: QuadratureRule | None = None) -> BoundReport:
    """Compare ``sup ||u^{k,m}||^2`` against the stability bound of the scheme.

    ``rhs = C_T (sup ||f||^2 + sup ||alpha||^2 + sup ||beta||^2)`` with
    ``C_T = 2 max(T^2, 1)``; the source norm is taken at the cell centres the
    solver actually samples.
    """
    grid = problem.grid
    rule = gauss_legendre_rule(64) if rule is None else rule
    lhs = field.interior_sup_norm_sq()
    f_sq = sup_sq_norm_over_times(problem.source, grid.midpoints, grid.midpoints, rule)
    a_sq = sup_sq_norm_over_edge(problem.alpha, grid.nodes, rule)
    b_sq = sup_sq_norm_over_edge(problem.beta, grid.nodes, rule)
    c_t = 2.0 * max(grid.T ** 2, 1.0)
    rhs = c_t * (f_sq + a_sq + b_sq)
    return BoundReport(lhs=lhs, rhs=rhs, holds=bool(lhs <= rhs))
