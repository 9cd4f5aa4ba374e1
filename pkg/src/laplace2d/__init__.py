"""Structured-grid solvers for the 2D Laplace equation.

Point methods (Jacobi, Gauss-Seidel, SOR), line methods (SLORA, SLORB, ADI)
and a V-cycle multigrid, all on the five-point stencil with Dirichlet
boundaries.
"""

from .config import ConvergenceHistory, DivergenceError, Method, MultigridError, SolverConfig
from .grid import (
    BoundaryMask,
    GridSpec,
    ProblemSpec,
    ScalarField,
    SizingError,
    make_grid,
    paper_chamber_problem,
    symmetric_chamber_problem,
)
from .io import load_field, load_problem, save_field, save_problem
from .solver import solve

__all__ = [
    "BoundaryMask",
    "ConvergenceHistory",
    "DivergenceError",
    "GridSpec",
    "Method",
    "MultigridError",
    "ProblemSpec",
    "ScalarField",
    "SizingError",
    "SolverConfig",
    "load_field",
    "load_problem",
    "make_grid",
    "paper_chamber_problem",
    "save_field",
    "save_problem",
    "solve",
    "symmetric_chamber_problem",
]
