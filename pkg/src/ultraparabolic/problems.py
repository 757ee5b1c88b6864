"""The four manufactured-solution benchmark problems and their reference errors.

Every entry stores its exact solution once; the initial data are its
``t = 0`` and ``s = 0`` slices and the nonlinear sources are written in terms
of it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .diagnostics import ErrorReport, field_error
from .linear import LinearProblem, SpectralField, solve_linear
from .nonlinear import (
    IterationReport,
    LipschitzSource,
    NonlinearProblem,
    ProductSource,
    picard_solve,
)
from .quadrature import gauss_legendre_rule
from .spectrum import BasisKind, make_basis
from .time_grid import TimeGrid

__all__ = ["Example", "ExampleRun", "EXAMPLES", "REFERENCE_TABLES", "get_example",
           "run_example"]


def _u1(x, t, s):
    return np.exp(-2 * t - s) * np.sin(x)


def _f1(x, t, s):
    return -2 * np.exp(-2 * t - s) * np.sin(x)


def _u2(x, t, s):
    return (t ** 2 + s ** 2 + 32) * np.cos(x / 2)


def _f2(x, t, s):
    return ((t / 2 + 2) ** 2 + (s / 2 + 2) ** 2) * np.cos(x / 2)


def _u3(x, t, s):
    return 0.25 * (np.exp(-t) + np.exp(-s)) * np.sin(3.5 * x)


def _f3(u, x, t, s):
    return 0.25 * (np.sin(u) - np.sin(_u3(x, t, s)))


def _forcing3(x, t, s):
    return 49 / 4 * _u3(x, t, s)


def _u4(x, t, s):
    return (np.sin(t) + 1 + np.exp(-s)) * np.cos(3 * x)


def _g4(u, x, t, s):
    return np.sin(u / 2)


def _h4(u, x, t, s):
    return u


def _offset4(x, t, s):
    ue = _u4(x, t, s)
    return -ue * np.sin(ue / 2)


def _forcing4(x, t, s):
    return (11 * np.sin(t) + np.cos(t) + 10 * np.exp(-s) + 11) * np.cos(3 * x)


@dataclass(frozen=True)
class Example:
    """A registry entry.

    Linear entries carry ``source``; nonlinear ones carry ``source_form`` plus a
    u-independent ``forcing`` sampled at lattice nodes.  ``active_modes``
    restricts the nonlinear solve to the modes the exact solution lives on.
    """

    id: int
    kind: BasisKind
    T: float
    exact: Callable
    source: Callable | None = None
    source_form: object | None = None
    forcing: Callable | None = None
    active_modes: tuple[int, ...] | None = None
    slice_axis: str = "t"
    slice_value: float = 0.5

    @property
    def is_linear(self) -> bool:
        return self.source_form is None

    def alpha(self, x, s):
        return self.exact(x, 0.0, s)

    def beta(self, x, t):
        return self.exact(x, t, 0.0)

    def problem(self, M: int, n_max: int = 8, T: float | None = None):
        basis = make_basis(self.kind, n_max)
        grid = TimeGrid(self.T if T is None else T, M)
        if self.is_linear:
            return LinearProblem(basis=basis, grid=grid, alpha=self.alpha, beta=self.beta,
                                 source=self.source)
        return NonlinearProblem(basis=basis, grid=grid, alpha=self.alpha, beta=self.beta,
                                source=self.source_form, forcing=self.forcing,
                                exact=self.exact)

    def default_q(self, M: int) -> int | None:
        if self.is_linear:
            return None
        for q, m, _, _ in REFERENCE_TABLES.get(self.id, []):
            if m == M:
                return q
        return 5

    def reference(self, M: int, q: int | None = None):
        """Published ``(l2, linf)`` for this resolution, or None."""
        for rq, rm, l2, linf in REFERENCE_TABLES.get(self.id, []):
            if rm == M and (q is None or rq is None or rq == q):
                return l2, linf
        return None


@dataclass
class ExampleRun:
    example: Example
    problem: object
    field: SpectralField
    error: ErrorReport
    report: IterationReport | None = None


EXAMPLES = {
    1: Example(1, BasisKind.DD, 1.0, _u1, source=_f1, slice_axis="t", slice_value=0.5),
    2: Example(2, BasisKind.ND, 1.0, _u2, source=_f2, slice_axis="x",
               slice_value=np.pi / 4),
    3: Example(3, BasisKind.DN_SHIFT1, 0.25, _u3,
               source_form=LipschitzSource(f=_f3, K=0.25), forcing=_forcing3,
               active_modes=(3,), slice_axis="t", slice_value=0.25),
    4: Example(4, BasisKind.NN_SHIFT2, 0.1, _u4,
               source_form=ProductSource(g=_g4, h=_h4, K1=1.0, K2=1.0, offset=_offset4),
               forcing=_forcing4, active_modes=(3,), slice_axis="x",
               slice_value=np.pi / 2),
}

# (q, M, l2, linf); q is None for the linear problems.
REFERENCE_TABLES = {
    1: [
        (None, 50, 1.51608045e-03, 3.84188903e-03),
        (None, 100, 7.55346287e-04, 1.92287169e-03),
        (None, 200, 3.85041789e-04, 9.61845810e-04),
        (None, 400, 1.88342949e-04, 4.81024266e-04),
    ],
    2: [
        (None, 50, 6.53270883e-03, 2.26666504e-02),
        (None, 100, 3.26622222e-03, 1.13406619e-02),
        (None, 200, 1.63312276e-03, 5.67215954e-03),
        (None, 400, 8.16570001e-04, 2.83653620e-03),
    ],
    3: [
        (2, 50, 5.82730398e-03, 1.16425665e-02),
        (3, 100, 2.90030629e-03, 5.85110603e-03),
        (4, 200, 1.44171369e-03, 2.91848574e-03),
        (5, 400, 7.18708022e-04, 1.45728672e-03),
    ],
    4: [
        (2, 50, 5.45295363e-03, 1.48732036e-02),
        (3, 100, 2.69804976e-03, 7.42289652e-03),
        (4, 200, 1.34196386e-03, 3.70802189e-03),
        (5, 400, 6.69222399e-04, 1.85315435e-03),
    ],
}


def get_example(example_id) -> Example:
    try:
        return EXAMPLES[int(example_id)]
    except (KeyError, ValueError):
        raise KeyError(f"unknown example {example_id!r}; choose from {sorted(EXAMPLES)}") \
            from None


def run_example(example_id, M: int, L: int = 20, q: int | None = None, n_max: int = 8,
                j0: int = 5, T: float | None = None) -> ExampleRun:
    """Solve a registry problem and measure its error on the (L+1) M^2 grid.

    ``example_id`` is a registry key or an :class:`Example`.  ``j0`` selects the
    ``j0 + 1``-point rule for nonlinear inner products.
    """
    ex = example_id if isinstance(example_id, Example) else get_example(example_id)
    problem = ex.problem(M, n_max=n_max, T=T)
    if ex.is_linear:
        field = solve_linear(problem)
        return ExampleRun(ex, problem, field, field_error(field, ex.exact, L))
    q = ex.default_q(M) if q is None else q
    modes = None
    if ex.active_modes is not None:
        modes = tuple(n for n in ex.active_modes if n <= n_max) or None
    field, report = picard_solve(problem, q_max=q, modes=modes,
                                 rule=gauss_legendre_rule(j0 + 1))
    return ExampleRun(ex, problem, field, field_error(field, ex.exact, L, q=q, j0=j0), report)
