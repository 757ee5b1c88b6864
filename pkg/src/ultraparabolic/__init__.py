"""Spectral-characteristic finite differences for ultraparabolic problems

    u_t + u_s + L u = f(u, t, s),   u(0, s) = alpha(s),   u(t, 0) = beta(t),

with L self-adjoint and diagonal in a known orthonormal eigenbasis on (0, pi).
"""

from .diagnostics import ErrorReport, convergence_study, discrete_norms, field_error
from .linear import (
    CompatibilityError,
    LinearProblem,
    SpectralField,
    attenuation,
    solve_linear,
    stability_bound_check,
)
from .nonlinear import (
    ContractionWarning,
    IterationReport,
    LipschitzSource,
    NonlinearProblem,
    ProductSource,
    a_priori_bound_check,
    contraction_check,
    picard_solve,
    picard_sweep,
)
from .problems import EXAMPLES, REFERENCE_TABLES, get_example, run_example
from .quadrature import QuadratureRule, gauss_legendre_rule, integrate
from .spectrum import BasisKind, EigenBasis, make_basis, project, synthesize
from .time_grid import DiagonalTrace, TimeGrid, characteristic_trace, roll_back_diagonal

__version__ = "0.1.0"
