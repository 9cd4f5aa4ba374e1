"""Dense direct solution of the five-point system, used as a test oracle."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import ProblemSpec, ScalarField

MAX_UNKNOWNS = 10_000


class SingularMatrixError(np.linalg.LinAlgError):
    pass


@dataclass(frozen=True)
class DenseSystem:
    """``A x = b`` over interior points ordered row by row (j outer, i inner).

    ``points[k]`` is the ``(i, j)`` of unknown ``k``.
    """

    A: np.ndarray
    b: np.ndarray
    points: np.ndarray
    problem: ProblemSpec


def assemble_dense(problem: ProblemSpec) -> DenseSystem:
    """Scaled five-point rows: ``2(1+b^2)`` on the diagonal, ``-1`` for x
    neighbours and ``-b^2`` for y neighbours; Dirichlet neighbours go to ``b``.
    """
    mask = problem.mask
    b2 = problem.grid.beta ** 2
    # row-major over interior points: j outer, i inner
    jj, ii = np.nonzero(mask.interior.T)
    points = np.column_stack([ii, jj])
    n = len(points)
    if n > MAX_UNKNOWNS:
        raise ValueError(f"{n} unknowns exceeds the dense oracle limit of {MAX_UNKNOWNS}")
    index = -np.ones(problem.grid.shape, dtype=int)
    index[ii, jj] = np.arange(n)

    A = np.zeros((n, n))
    rhs = np.zeros(n)
    for k, (i, j) in enumerate(points):
        A[k, k] = 2.0 * (1.0 + b2)
        for di, dj, coef in ((1, 0, 1.0), (-1, 0, 1.0), (0, 1, b2), (0, -1, b2)):
            p, q = i + di, j + dj
            if mask.interior[p, q]:
                A[k, index[p, q]] = -coef
            else:
                rhs[k] += coef * mask.values[p, q]
    return DenseSystem(A, rhs, points, problem)


def dense_solve(sys: DenseSystem) -> ScalarField:
    """Solve by LU with partial pivoting and scatter into a full field."""
    try:
        x = np.linalg.solve(sys.A, sys.b)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(str(exc)) from exc
    if not np.isfinite(x).all():
        raise SingularMatrixError("solution is not finite")
    field = sys.problem.mask.initial_field()
    field.values[sys.points[:, 0], sys.points[:, 1]] = x
    return field


def direct_solution(problem: ProblemSpec) -> ScalarField:
    return dense_solve(assemble_dense(problem))
