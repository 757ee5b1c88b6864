"""Picard iteration for u_t + u_s + L u = f(u, t, s).

Each sweep rebuilds the whole lattice field from the previous iterate: the
nonlinear term is evaluated on ``u_{q-1}`` at the quadrature nodes, projected
onto the active modes, and fed to the same characteristic summation as the
linear solver.  The iteration starts from ``u_0 = 0`` on interior points.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from .linear import (
    BoundReport,
    CompatibilityError,
    SpectralField,
    _check_points,
    _eval2,
    COMPATIBILITY_TOL,
    cell_coefficients,
    characteristic_solve,
    default_projection_rule,
    initial_coefficients,
    sup_sq_norm_over_edge,
    sup_sq_norm_over_times,
)
from .quadrature import QuadratureRule, gauss_legendre_rule
from .spectrum import EigenBasis, project
from .time_grid import TimeGrid

__all__ = [
    "ContractionWarning",
    "LipschitzSource",
    "ProductSource",
    "NonlinearProblem",
    "IterationReport",
    "picard_solve",
    "picard_sweep",
    "contraction_check",
    "a_priori_bound_check",
    "verify_source_conditions",
]


class ContractionWarning(UserWarning):
    """The contraction constant bound is not below one."""


@dataclass(frozen=True)
class LipschitzSource:
    """``f(u, x, t, s)`` with ``||f(u) - f(v)|| <= K ||u - v||``."""

    f: Callable
    K: float

    def __call__(self, u, x, t, s):
        return self.f(u, x, t, s)

    @property
    def lipschitz(self) -> float:
        return self.K


@dataclass(frozen=True)
class ProductSource:
    """``g(u, x, t, s) * h(u, x, t, s) + offset(x, t, s)`` with ``|g| <= K1`` and
    ``h`` Lipschitz with constant ``K2``.

    ``offset`` is a u-independent term integrated with the same quadrature rule
    as ``g * h`` (manufactured solutions use it to cancel ``g h`` at the exact
    solution).
    """

    g: Callable
    h: Callable
    K1: float
    K2: float
    offset: Callable | None = None

    def __call__(self, u, x, t, s):
        out = self.g(u, x, t, s) * self.h(u, x, t, s)
        if self.offset is not None:
            out = out + self.offset(x, t, s)
        return out

    @property
    def lipschitz(self) -> float:
        return self.K1 * self.K2


SourceForm = Union[LipschitzSource, ProductSource]


@dataclass
class NonlinearProblem:
    """Nonlinear problem data.

    ``forcing(x, t, s)`` is an optional u-independent term projected with the
    accurate data rule rather than the (coarse) nonlinear rule.  It is sampled
    at lattice nodes unless ``forcing_at_midpoints`` is set.  ``exact`` is only
    used for error reporting.
    """

    basis: EigenBasis
    grid: TimeGrid
    alpha: Callable
    beta: Callable
    source: SourceForm
    forcing: Callable | None = None
    forcing_at_midpoints: bool = False
    exact: Callable | None = None

    @property
    def kappa_bound(self) -> float:
        return self.grid.T * self.source.lipschitz

    def check_compatibility(self, rule: QuadratureRule | None = None, tol=COMPATIBILITY_TOL):
        xs = _check_points(rule)
        gap = np.max(np.abs(_eval2(self.alpha, xs, 0.0) - _eval2(self.beta, xs, 0.0)))
        if gap > tol:
            raise CompatibilityError(f"alpha(x, 0) and beta(x, 0) differ by {gap:.3e}")


@dataclass
class IterationReport:
    q: int
    sup_increments: list[float]
    kappa_estimate: float
    kappa_bound: float
    previous: SpectralField | None = field(default=None, repr=False)


class _Sweeper:
    """Caches everything a Picard sweep needs that does not depend on u."""

    def __init__(self, problem: NonlinearProblem, modes, rule, data_rule):
        self.problem = problem
        self.modes = tuple(modes)
        self.rule = rule
        basis, grid = problem.basis, problem.grid
        self.lambdas = [basis.eigenvalue(n) for n in self.modes]
        self.alpha_c = initial_coefficients(problem.alpha, basis, grid, data_rule, self.modes)
        self.beta_c = initial_coefficients(problem.beta, basis, grid, data_rule, self.modes)
        if problem.forcing is None:
            self.forcing_c = 0.0
        else:
            times = grid.midpoints if problem.forcing_at_midpoints else grid.nodes[1:]
            self.forcing_c = cell_coefficients(problem.forcing, basis, times, data_rule,
                                               self.modes)
        self.phi_q = basis.evaluate(rule.nodes, self.modes)
        times = grid.nodes[1:]
        self._x = rule.nodes[None, None, :]
        self._t = times[:, None, None]
        self._s = times[None, :, None]

    def nonlinear_coefficients(self, coeffs: np.ndarray) -> np.ndarray:
        """Projected ``f(u^{a,b}, x, t_a, s_b)`` for interior ``(a, b)``, shape (n, M, M)."""
        u = np.einsum("nkm,nj->kmj", coeffs[:, 1:, 1:], self.phi_q)
        vals = np.asarray(self.problem.source(u, self._x, self._t, self._s), dtype=float)
        vals = np.broadcast_to(vals, u.shape)
        proj = project(vals, self.problem.basis, self.rule, self.modes)
        return np.moveaxis(proj, -1, 0)

    def sweep(self, coeffs: np.ndarray) -> np.ndarray:
        cells = self.nonlinear_coefficients(coeffs) + self.forcing_c
        out = np.empty_like(coeffs)
        omega = self.problem.grid.omega
        for i, lam in enumerate(self.lambdas):
            out[i] = characteristic_solve(lam, omega, cells[i], self.alpha_c[i], self.beta_c[i])
        return out

    def zero_iterate(self) -> np.ndarray:
        M = self.problem.grid.M
        out = np.zeros((len(self.modes), M + 1, M + 1))
        out[:, 0, :] = self.alpha_c
        out[:, :, 0] = self.beta_c
        return out

    def wrap(self, coeffs) -> SpectralField:
        return SpectralField(basis=self.problem.basis, grid=self.problem.grid,
                             modes=self.modes, coeffs=coeffs)


def _resolve(problem, n_max, modes, rule, data_rule):
    basis = problem.basis
    if modes is None:
        n_max = basis.n_max if n_max is None else n_max
        if not 1 <= n_max <= basis.n_max:
            raise ValueError(f"n_max must lie in 1..{basis.n_max}")
        modes = tuple(range(1, n_max + 1))
    else:
        modes = tuple(int(n) for n in modes)
        if not modes or any(not 1 <= n <= basis.n_max for n in modes):
            raise ValueError(f"modes must be a nonempty subset of 1..{basis.n_max}")
    rule = gauss_legendre_rule(6) if rule is None else rule
    data_rule = default_projection_rule(max(modes)) if data_rule is None else data_rule
    return modes, rule, data_rule


def _sup_norm(diff: np.ndarray) -> float:
    return float(np.sqrt(np.einsum("nkm,nkm->km", diff, diff)[1:, 1:].max()))


def picard_sweep(problem: NonlinearProblem, previous: SpectralField,
                 rule: QuadratureRule | None = None,
                 data_rule: QuadratureRule | None = None) -> SpectralField:
    """One Picard update ``u_q`` from ``u_{q-1}``, on the modes of ``previous``."""
    modes, rule, data_rule = _resolve(problem, None, previous.modes, rule, data_rule)
    sweeper = _Sweeper(problem, modes, rule, data_rule)
    return sweeper.wrap(sweeper.sweep(previous.coeffs))


def picard_solve(problem: NonlinearProblem, n_max: int | None = None, q_max: int = 50,
                 tol: float | None = None, rule: QuadratureRule | None = None,
                 modes: Sequence[int] | None = None,
                 data_rule: QuadratureRule | None = None):
    """Run Picard sweeps from ``u_0 = 0``.

    Parameters
    ----------
    problem : NonlinearProblem
    n_max : int, optional
        Solve on modes ``1..n_max`` (default: the whole basis).
    q_max : int
        Iteration cap.  Without ``tol`` exactly ``q_max`` sweeps run.
    tol : float, optional
        Stop once ``sup_{k,m} ||u_q - u_{q-1}||`` drops to ``tol`` or below.
    rule : QuadratureRule, optional
        Rule for the nonlinear inner products; 6 Gauss points by default.
    modes : sequence of int, optional
        Explicit active modes; overrides ``n_max``.
    data_rule : QuadratureRule, optional
        Rule for the initial data and the forcing term.

    Returns
    -------
    field : SpectralField
        The last iterate ``u_q``.
    report : IterationReport
        ``report.previous`` holds ``u_{q-1}``.
    """
    if q_max < 1:
        raise ValueError("q_max must be at least 1")
    modes, rule, data_rule = _resolve(problem, n_max, modes, rule, data_rule)
    problem.check_compatibility(data_rule)
    kappa_bound = problem.kappa_bound
    if kappa_bound >= 1:
        warnings.warn(f"T * K = {kappa_bound:.3g} >= 1: contraction is not guaranteed",
                      ContractionWarning, stacklevel=2)

    sweeper = _Sweeper(problem, modes, rule, data_rule)
    current = sweeper.zero_iterate()
    previous = current
    increments: list[float] = []
    for _ in range(q_max):
        nxt = sweeper.sweep(current)
        increments.append(_sup_norm(nxt - current))
        previous, current = current, nxt
        if tol is not None and increments[-1] <= tol:
            break

    report = IterationReport(
        q=len(increments),
        sup_increments=increments,
        kappa_estimate=_max_ratio(increments),
        kappa_bound=kappa_bound,
        previous=sweeper.wrap(previous),
    )
    return sweeper.wrap(current), report


def _ratios(increments, floor):
    out = []
    for a, b in zip(increments, increments[1:]):
        if a <= floor:
            # Already at the fixed point to working precision.
            out.append(0.0 if b <= floor else math.inf)
        else:
            out.append(b / a)
    return out


def _max_ratio(increments) -> float:
    floor = 1e-13 * max(increments, default=0.0)
    return max(_ratios(increments, floor), default=0.0)


def contraction_check(report: IterationReport, slack: float = 0.05,
                      rel_floor: float = 1e-13) -> bool:
    """True if every consecutive increment ratio is at most ``kappa_bound + slack``.

    Increments below ``rel_floor`` times the first one count as zero.
    """
    inc = report.sup_increments
    if len(inc) < 3:
        raise ValueError("need at least three increments")
    floor = rel_floor * inc[0]
    return all(r <= report.kappa_bound + slack for r in _ratios(inc, floor))


def _zero_state_sq(problem: NonlinearProblem, rule: QuadratureRule) -> float:
    """``sup ||z(t_k, s_m)||^2`` where ``||f(u)|| <= K_eff ||u|| + ||z||`` pointwise in time."""
    grid = problem.grid
    times = grid.nodes[1:]
    x = rule.nodes[None, None, :]
    t = times[:, None, None]
    s = times[None, :, None]
    shape = (times.size, times.size, len(rule))
    zero = np.zeros(shape)

    def l2(vals):
        vals = np.broadcast_to(np.asarray(vals, dtype=float), shape)
        return np.sqrt(vals ** 2 @ rule.weights)

    src = problem.source
    extra = np.zeros(shape)
    if problem.forcing is not None:
        ft = t - 0.5 * grid.omega if problem.forcing_at_midpoints else t
        fs = s - 0.5 * grid.omega if problem.forcing_at_midpoints else s
        extra = extra + problem.forcing(x, ft, fs)
    if isinstance(src, ProductSource):
        if src.offset is not None:
            extra = extra + src.offset(x, t, s)
        bound = src.K1 * l2(src.h(zero, x, t, s)) + l2(extra)
    else:
        bound = l2(src(zero, x, t, s) + extra)
    return float((bound ** 2).max())


def a_priori_bound_check(field_q: SpectralField, field_qm1: SpectralField,
                         problem: NonlinearProblem,
                         rule: QuadratureRule | None = None) -> BoundReport:
    """A priori estimate linking consecutive Picard iterates.

    ``sup ||u_q||^2 <= C_T (sup ||u_{q-1}||^2 + sup ||z||^2 + sup ||alpha||^2 + sup ||beta||^2)``
    with ``C_T = max(2 T^2 (K^2 + 1), 2)``.  For the Lipschitz form ``z`` is
    the source at ``u = 0`` (plus any forcing); for the product form ``K`` is
    ``K1 K2`` and ``||z|| = K1 ||h(0)|| + ||offset + forcing||``.
    """
    grid = problem.grid
    rule = gauss_legendre_rule(64) if rule is None else rule
    lhs = field_q.interior_sup_norm_sq()
    prev_sq = field_qm1.interior_sup_norm_sq()
    z_sq = _zero_state_sq(problem, rule)
    a_sq = sup_sq_norm_over_edge(problem.alpha, grid.nodes, rule)
    b_sq = sup_sq_norm_over_edge(problem.beta, grid.nodes, rule)
    K = problem.source.lipschitz
    c_t = max(2.0 * grid.T ** 2 * (K ** 2 + 1.0), 2.0)
    rhs = c_t * (prev_sq + z_sq + a_sq + b_sq)
    return BoundReport(lhs=lhs, rhs=rhs, holds=bool(lhs <= rhs))


def verify_source_conditions(problem: NonlinearProblem, trials: int = 20,
                             n_modes: int = 4, rng=None,
                             rule: QuadratureRule | None = None) -> bool:
    """Spot-check the declared constants on random smooth fields.

    Lipschitz form: ``||f(u) - f(v)|| <= K ||u - v||``.  Product form:
    ``|g(u)| <= K1`` at every node and ``||h(u) - h(v)|| <= K2 ||u - v||``.
    Norms are L2(0, pi) by quadrature at random lattice times.
    """
    rng = np.random.default_rng(rng)
    rule = gauss_legendre_rule(64) if rule is None else rule
    basis, grid = problem.basis, problem.grid
    phi = basis.evaluate(rule.nodes, range(1, min(n_modes, basis.n_max) + 1))
    x = rule.nodes
    src = problem.source

    def norm(vals):
        return math.sqrt(float(np.asarray(vals) ** 2 @ rule.weights))

    for _ in range(trials):
        u = rng.normal(scale=2.0, size=phi.shape[0]) @ phi
        v = rng.normal(scale=2.0, size=phi.shape[0]) @ phi
        t, s = rng.choice(grid.nodes), rng.choice(grid.nodes)
        gap = norm(u - v) * (1 + 1e-12)
        if isinstance(src, ProductSource):
            if np.max(np.abs(src.g(u, x, t, s))) > src.K1 * (1 + 1e-12):
                return False
            if norm(src.h(u, x, t, s) - src.h(v, x, t, s)) > src.K2 * gap:
                return False
        elif norm(src(u, x, t, s) - src(v, x, t, s)) > src.K * gap:
            return False
    return True
