"""Error norms over the evaluation grid and convergence studies."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .linear import SpectralField
from .time_grid import TimeGrid

__all__ = [
    "ErrorReport",
    "ConvergenceRow",
    "evaluation_points",
    "discrete_norms",
    "field_error",
    "convergence_study",
    "observed_order",
]


@dataclass(frozen=True)
class ErrorReport:
    l2: float
    linf: float
    grid_points: int
    M: int | None = None
    L: int | None = None
    q: int | None = None
    j0: int | None = None


@dataclass(frozen=True)
class ConvergenceRow:
    M: int
    q: int | None
    l2: float
    linf: float
    order_l2: float | None
    order_linf: float | None


def evaluation_points(grid: TimeGrid, L: int):
    """``x_j = j pi / L`` (j = 0..L) and interior lattice times ``k omega`` (k = 1..M)."""
    if L < 1:
        raise ValueError("L must be positive")
    return np.linspace(0.0, np.pi, L + 1), grid.nodes[1:]


def discrete_norms(approx, exact, *, M=None, L=None, q=None, j0=None) -> ErrorReport:
    """Root-mean-square and max of ``exact - approx`` over matching sample sets."""
    approx = np.asarray(approx, dtype=float)
    exact = np.asarray(exact, dtype=float)
    if approx.shape != exact.shape:
        raise ValueError(f"grid mismatch: {approx.shape} vs {exact.shape}")
    err = exact - approx
    if err.size == 0:
        raise ValueError("empty evaluation grid")
    return ErrorReport(
        l2=float(np.sqrt(np.mean(err ** 2))),
        linf=float(np.max(np.abs(err))),
        grid_points=int(err.size),
        M=M, L=L, q=q, j0=j0,
    )


def field_error(field: SpectralField, exact: Callable, L: int = 20,
                q: int | None = None, j0: int | None = None) -> ErrorReport:
    """Error of ``field`` against ``exact(x, t, s)`` on the (L+1) M^2 grid.

    The grid excludes the initial slices ``k = 0`` and ``m = 0`` and includes
    both spatial endpoints.
    """
    xs, times = evaluation_points(field.grid, L)
    approx = field.values(xs)[:, 1:, 1:]
    ref = np.broadcast_to(
        np.asarray(exact(xs[:, None, None], times[None, :, None], times[None, None, :]),
                   dtype=float),
        approx.shape,
    )
    return discrete_norms(approx, ref, M=field.grid.M, L=L, q=q, j0=j0)


def observed_order(e_coarse: float, e_fine: float, refinement: float = 2.0) -> float | None:
    """``log(e_coarse / e_fine) / log(refinement)``; None when either error is zero."""
    if e_coarse <= 0 or e_fine <= 0:
        return None
    return math.log(e_coarse / e_fine) / math.log(refinement)


def convergence_study(runner, M_list: Sequence[int], q_list: Sequence[int] | None = None
                      ) -> list[ConvergenceRow]:
    """Run ``runner(M, q)`` for each row and attach pairwise observed orders.

    ``runner`` returns an :class:`ErrorReport` (anything with ``l2`` and
    ``linf``).  Rows pair ``M_list[i]`` with ``q_list[i]`` when given.
    """
    M_list = list(M_list)
    if len(M_list) < 2:
        raise ValueError("need at least two resolutions")
    if any(b <= a for a, b in zip(M_list, M_list[1:])):
        raise ValueError("M_list must be increasing")
    q_list = [None] * len(M_list) if q_list is None else list(q_list)
    if len(q_list) != len(M_list):
        raise ValueError("q_list and M_list differ in length")

    reports = [runner(M, q) for M, q in zip(M_list, q_list)]
    rows = []
    for i, (M, q, rep) in enumerate(zip(M_list, q_list, reports)):
        if i == 0:
            o2 = oinf = None
        else:
            prev = reports[i - 1]
            ratio = M / M_list[i - 1]
            o2 = observed_order(prev.l2, rep.l2, ratio)
            oinf = observed_order(prev.linf, rep.linf, ratio)
        rows.append(ConvergenceRow(M=M, q=q, l2=rep.l2, linf=rep.linf,
                                   order_l2=o2, order_linf=oinf))
    return rows
