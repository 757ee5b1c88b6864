"""Spatial operators on (0, pi) with closed-form orthonormal eigenbases.

Each catalog entry is a shifted negative second derivative, ``-d^2/dx^2 + c``,
under one pair of homogeneous boundary conditions.  Its eigenfunctions are
``sqrt(2/pi) * trig(nu_n x)`` with eigenvalue ``nu_n**2 + c``.  Modes are
indexed from 1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .quadrature import QuadratureRule

__all__ = ["BasisKind", "EigenBasis", "make_basis", "project", "synthesize"]

_NORM = np.sqrt(2.0 / np.pi)


class BasisKind(str, enum.Enum):
    DD = "DD"
    """Dirichlet at both ends: sin(n x), lambda = n^2."""
    ND = "ND"
    """Neumann at 0, Dirichlet at pi: cos((n - 1/2) x), lambda = (n - 1/2)^2."""
    DN_SHIFT1 = "DN_shift1"
    """Dirichlet at 0, Neumann at pi, shift 1: sin((n + 1/2) x), lambda = (n + 1/2)^2 + 1."""
    NN_SHIFT2 = "NN_shift2"
    """Neumann at both ends, shift 2: cos(n x), lambda = n^2 + 2 (n >= 1)."""


# kind -> (frequency offset, trig function, spectral shift)
_CATALOG = {
    BasisKind.DD: (Fraction(0), np.sin, 0),
    BasisKind.ND: (Fraction(-1, 2), np.cos, 0),
    BasisKind.DN_SHIFT1: (Fraction(1, 2), np.sin, 1),
    BasisKind.NN_SHIFT2: (Fraction(0), np.cos, 2),
}


@dataclass(frozen=True)
class EigenBasis:
    """The first ``n_max`` eigenpairs of a catalog operator."""

    kind: BasisKind
    n_max: int

    def exact_eigenvalue(self, n: int) -> Fraction:
        offset, _, shift = _CATALOG[self.kind]
        return (n + offset) ** 2 + shift

    def frequency(self, n: int) -> float:
        return float(n + _CATALOG[self.kind][0])

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([float(self.exact_eigenvalue(n)) for n in range(1, self.n_max + 1)])

    def eigenvalue(self, n: int) -> float:
        self._check_mode(n)
        return float(self.exact_eigenvalue(n))

    def phi(self, n: int, x) -> np.ndarray:
        """Evaluate eigenfunction ``n`` at ``x``."""
        self._check_mode(n)
        trig = _CATALOG[self.kind][1]
        return _NORM * trig(self.frequency(n) * np.asarray(x, dtype=float))

    def evaluate(self, x, modes: Sequence[int] | None = None) -> np.ndarray:
        """Matrix of eigenfunction values, shape ``(len(modes), len(x))``."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        modes = self.modes if modes is None else modes
        if len(modes) == 0:
            return np.zeros((0, x.size))
        return np.stack([self.phi(n, x) for n in modes])

    @property
    def modes(self) -> tuple[int, ...]:
        return tuple(range(1, self.n_max + 1))

    @property
    def pairs(self) -> list[tuple[int, float, Callable]]:
        return [
            (n, float(self.exact_eigenvalue(n)), lambda x, n=n: self.phi(n, x))
            for n in self.modes
        ]

    def _check_mode(self, n: int):
        if not 1 <= n <= self.n_max:
            raise IndexError(f"mode {n} outside 1..{self.n_max}")


def make_basis(kind: BasisKind | str, n_max: int) -> EigenBasis:
    """Build the catalog basis ``kind`` truncated to ``n_max`` modes."""
    kind = BasisKind(kind)
    if int(n_max) != n_max or n_max < 1:
        raise ValueError(f"n_max must be a positive integer, got {n_max!r}")
    return EigenBasis(kind=kind, n_max=int(n_max))


def project(samples, basis: EigenBasis, rule: QuadratureRule,
            modes: Sequence[int] | None = None) -> np.ndarray:
    """Spectral coefficients ``<samples, phi_n>`` by quadrature.

    Parameters
    ----------
    samples : callable or ndarray
        Either a function of ``x`` or values already taken at ``rule.nodes``.
        Arrays may carry leading batch axes; the last axis runs over nodes.
    basis : EigenBasis
    rule : QuadratureRule
    modes : sequence of int, optional
        1-based modes to compute; defaults to all of ``basis``.

    Returns
    -------
    ndarray
        Shape ``(..., len(modes))``.
    """
    if callable(samples):
        values = np.broadcast_to(np.asarray(samples(rule.nodes), dtype=float),
                                 rule.nodes.shape)
    else:
        values = np.asarray(samples, dtype=float)
        if values.shape[-1] != len(rule):
            raise ValueError("last axis of samples must match the rule's node count")
    weighted_phi = basis.evaluate(rule.nodes, modes) * rule.weights
    return values @ weighted_phi.T


def synthesize(coeffs, basis: EigenBasis, xs) -> np.ndarray:
    """Evaluate ``sum_n coeffs[..., n-1] phi_n(xs)``; result shape ``(..., len(xs))``."""
    coeffs = np.asarray(coeffs, dtype=float)
    n = coeffs.shape[-1]
    if n > basis.n_max:
        raise ValueError(f"{n} coefficients exceed basis size {basis.n_max}")
    return coeffs @ basis.evaluate(xs, range(1, n + 1))
