"""Uniform two-time lattice and characteristic-diagonal index arithmetic.

With equal steps on every time axis, the one-step relation

    v[k1, ..., kd] = omega * F[k1, ..., kd] + v[k1 - 1, ..., kd - 1]

moves along the main diagonal only, so the value at any lattice point is a
sum over the diagonal back to the point where some index hits zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "TimeGrid",
    "DiagonalTrace",
    "characteristic_trace",
    "roll_back_diagonal",
    "diagonal_layout",
]


@dataclass(frozen=True)
class TimeGrid:
    """Identical lattices ``t_k = k * omega`` and ``s_m = m * omega`` on [0, T]."""

    T: float
    M: int

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 1:
            raise ValueError(f"M must be a positive integer, got {self.M!r}")
        if not self.T > 0:
            raise ValueError(f"T must be positive, got {self.T!r}")
        object.__setattr__(self, "M", int(self.M))
        object.__setattr__(self, "T", float(self.T))

    @property
    def omega(self) -> float:
        return self.T / self.M

    @property
    def nodes(self) -> np.ndarray:
        """``k * omega`` for k = 0..M."""
        return np.arange(self.M + 1) * self.omega

    @property
    def midpoints(self) -> np.ndarray:
        """Cell centres ``k * omega - omega / 2`` for k = 1..M."""
        return self.nodes[1:] - 0.5 * self.omega

    def index_of(self, value: float, tol: float | None = None) -> int:
        """Lattice index nearest to ``value``; raises if farther than ``tol``."""
        tol = 1e-9 * self.T if tol is None else tol
        k = int(round(value / self.omega))
        if not 0 <= k <= self.M or abs(k * self.omega - value) > tol:
            raise ValueError(f"{value!r} is not a lattice time of {self}")
        return k


@dataclass(frozen=True)
class DiagonalTrace:
    k: int
    m: int
    p: int
    foot: tuple[int, int]

    @property
    def visited(self) -> list[tuple[int, int]]:
        """Points ``(k - p + l, m - p + l)`` for l = 1..p, from the foot upward."""
        return [(self.k - self.p + l, self.m - self.p + l) for l in range(1, self.p + 1)]


def characteristic_trace(k: int, m: int, grid: TimeGrid | None = None) -> DiagonalTrace:
    """Depth and foot of the characteristic through lattice point ``(k, m)``.

    The foot lies on the ``s = 0`` edge when ``k > m`` and on the ``t = 0`` edge
    when ``m > k``.  On the main diagonal it is the corner ``(0, 0)``, where the
    two initial data agree.
    """
    upper = grid.M if grid is not None else None
    for idx in (k, m):
        if idx < 0 or (upper is not None and idx > upper):
            raise ValueError(f"index {idx} outside the lattice")
    p = min(k, m)
    return DiagonalTrace(k=k, m=m, p=p, foot=(k - p, m - p))


def roll_back_diagonal(step_sources, start, p: int, omega: float, boundary: float) -> float:
    """Closed form of ``p`` one-step updates along the diagonal ending at ``start``.

    Returns ``omega * sum_{l=1..p} F[start - (p - l)] + boundary`` where
    ``boundary`` is the value at ``start - p`` (every coordinate shifted).
    ``step_sources`` is a d-dimensional array, d >= 2.
    """
    F = np.asarray(step_sources, dtype=float)
    start = tuple(int(i) for i in start)
    if F.ndim < 2 or len(start) != F.ndim:
        raise ValueError("need a d >= 2 lattice and a matching d-tuple start")
    if p < 0 or any(i < p for i in start):
        raise ValueError(f"depth {p} exceeds a start coordinate of {start}")
    if p == 0:
        return float(boundary)
    shifts = np.arange(p - 1, -1, -1)
    index = tuple(i - shifts for i in start)
    return float(omega * F[index].sum() + boundary)


def diagonal_layout(M: int):
    """Index arrays packing every interior diagonal of an M x M lattice.

    Row ``r`` holds the diagonal ``k - m = r - (M - 1)``; column ``j`` is its
    ``(j + 1)``-th point counted up from the foot.  Returns ``(k, m, valid)``,
    each of shape ``(2M - 1, M)``; padded slots carry ``valid = False`` and
    index 1 so that gathers stay in bounds.
    """
    offsets = np.arange(-(M - 1), M)[:, None]
    j = np.arange(M)[None, :]
    k = np.where(offsets >= 0, offsets + j + 1, j + 1)
    m = np.where(offsets >= 0, j + 1, j + 1 - offsets)
    valid = j < M - np.abs(offsets)
    k = np.where(valid, k, 1)
    m = np.where(valid, m, 1)
    return k, m, valid
