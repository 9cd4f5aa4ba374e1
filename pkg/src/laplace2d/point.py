"""Point relaxation sweeps: Jacobi, Gauss-Seidel and SOR.

All sweeps solve the scaled five-point equation

    psi[i,j] = (psi[i+1,j] + psi[i-1,j] + beta^2 (psi[i,j+1] + psi[i,j-1]) + src[i,j])
               / (2 (1 + beta^2))

where ``src`` is ``dx^2 * R`` for the multigrid correction equation and zero
for Laplace. Gauss-Seidel and SOR run in place, rows bottom-to-top and
left-to-right within a row, so the ``i-1`` and ``j-1`` neighbours are read
after their update.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .grid import BoundaryMask, ScalarField


def as_array(field) -> np.ndarray:
    """Underlying value array of a field (no copy)."""
    return field.values if isinstance(field, ScalarField) else field


@njit(cache=True, nogil=True)
def _gs_kernel(psi, interior, b2, src):
    m, n = psi.shape
    denom = 2.0 * (1.0 + b2)
    for j in range(1, n - 1):
        for i in range(1, m - 1):
            if interior[i, j]:
                psi[i, j] = (psi[i + 1, j] + psi[i - 1, j] + b2 * (psi[i, j + 1] + psi[i, j - 1]) + src[i, j]) / denom


@njit(cache=True, nogil=True)
def _sor_kernel(psi, interior, b2, omega):
    m, n = psi.shape
    denom = 2.0 * (1.0 + b2)
    for j in range(1, n - 1):
        for i in range(1, m - 1):
            if interior[i, j]:
                gs = (psi[i + 1, j] + psi[i - 1, j] + b2 * (psi[i, j + 1] + psi[i, j - 1])) / denom
                psi[i, j] = (1.0 - omega) * psi[i, j] + omega * gs


def jacobi_sweep(old, mask: BoundaryMask):
    """One Jacobi iteration; returns a new field and leaves ``old`` untouched.

    Every interior update reads only old values, so the whole sweep is a
    single vectorised array expression.
    """
    psi = as_array(old)
    b2 = mask.grid.beta ** 2
    new = mask.values.copy()
    inner = (psi[2:, 1:-1] + psi[:-2, 1:-1] + b2 * (psi[1:-1, 2:] + psi[1:-1, :-2])) / (2.0 * (1.0 + b2))
    np.copyto(new[1:-1, 1:-1], inner, where=mask.interior[1:-1, 1:-1])
    if isinstance(old, ScalarField):
        return ScalarField(old.grid, new)
    return new


def gauss_seidel_sweep(field, mask: BoundaryMask, source: np.ndarray | None = None):
    """One in-place lexicographic Gauss-Seidel sweep.

    ``source`` is the scaled right-hand side ``dx^2 * R`` used when smoothing
    the multigrid correction equation; omit it for Laplace.
    """
    psi = as_array(field)
    if source is None:
        source = np.zeros(psi.shape)
    _gs_kernel(psi, mask.interior, mask.grid.beta ** 2, source)
    return field


def sor_sweep(field, mask: BoundaryMask, omega: float):
    """One in-place SOR sweep: ``(1-w) * old + w * (Gauss-Seidel value)``."""
    psi = as_array(field)
    _sor_kernel(psi, mask.interior, mask.grid.beta ** 2, float(omega))
    return field
