"""Five-point discrete Laplacian, residuals and the infinity-norm error."""

from __future__ import annotations

import numpy as np

from .grid import BoundaryMask, ScalarField


def _values(field) -> np.ndarray:
    return field.values if isinstance(field, ScalarField) else np.asarray(field, dtype=float)


def laplace_apply(field, mask: BoundaryMask, i: int, j: int) -> float:
    """Five-point Laplacian of ``field`` at interior point ``(i, j)``."""
    if not mask.interior[i, j]:
        raise ValueError(f"({i}, {j}) is not an interior point")
    psi = _values(field)
    g = mask.grid
    return (psi[i - 1, j] - 2.0 * psi[i, j] + psi[i + 1, j]) / g.dx**2 + (
        psi[i, j - 1] - 2.0 * psi[i, j] + psi[i, j + 1]
    ) / g.dy**2


def laplacian(psi: np.ndarray, dx: float, dy: float) -> np.ndarray:
    """Five-point Laplacian on the inner ``(m-2, n-2)`` block."""
    return (psi[:-2, 1:-1] - 2.0 * psi[1:-1, 1:-1] + psi[2:, 1:-1]) / dx**2 + (
        psi[1:-1, :-2] - 2.0 * psi[1:-1, 1:-1] + psi[1:-1, 2:]
    ) / dy**2


def residual(field, mask: BoundaryMask, forcing=None) -> np.ndarray:
    """``L(field) + forcing`` at interior points, zero at Dirichlet points.

    Without ``forcing`` this is the plain residual of the Laplace equation;
    with the restricted residual as ``forcing`` it is the defect of the
    coarse correction equation ``L(dpsi) + R = 0``.
    """
    psi = _values(field)
    g = mask.grid
    if psi.shape != g.shape:
        raise ValueError(f"field shape {psi.shape} does not match grid {g.shape}")
    r = np.zeros(g.shape)
    r[1:-1, 1:-1] = laplacian(psi, g.dx, g.dy)
    if forcing is not None:
        f = _values(forcing)
        if f.shape != g.shape:
            raise ValueError(f"forcing shape {f.shape} does not match grid {g.shape}")
        r += f
    r[~mask.interior] = 0.0
    return r


def infinity_error(new, old) -> float:
    """Largest pointwise absolute difference between two fields."""
    a, b = _values(new), _values(old)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    return float(np.max(np.abs(a - b)))


def max_residual(field, mask: BoundaryMask) -> float:
    return float(np.max(np.abs(residual(field, mask))))
