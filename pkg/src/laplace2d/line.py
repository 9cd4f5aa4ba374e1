"""Thomas algorithm and the line-implicit sweeps SLORA, SLORB and ADI.

A line sweep treats each grid row (or column) as a tridiagonal system in the
unknowns along that line, with the perpendicular neighbours on the right-hand
side. Rows are visited bottom-to-top, so the row below has already been
updated when a row is solved. Rows broken by interior Dirichlet points are
split into maximal runs of interior points, each solved on its own.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .grid import BoundaryMask
from .point import as_array

PIVOT_RTOL = 1e-14

_RELAX_AFTER = 0  # SLORA: solve, then blend with the old row
_RELAX_INSIDE = 1  # SLORB: relaxation folded into the line system


class SingularSystemError(ArithmeticError):
    """Zero (or negligible) pivot met during Thomas forward elimination."""


@dataclass(frozen=True)
class TridiagonalSystem:
    """``lower[k-1] x[k-1] + diag[k] x[k] + upper[k] x[k+1] = rhs[k]``."""

    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        for name in ("lower", "diag", "upper", "rhs"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        n = self.diag.shape[0]
        if n < 1:
            raise ValueError("empty system")
        if self.rhs.shape != (n,) or self.lower.shape != (n - 1,) or self.upper.shape != (n - 1,):
            raise ValueError(
                f"inconsistent lengths: lower={self.lower.shape}, diag={self.diag.shape}, "
                f"upper={self.upper.shape}, rhs={self.rhs.shape}"
            )
        for name in ("lower", "diag", "upper", "rhs"):
            if not np.isfinite(getattr(self, name)).all():
                raise ValueError(f"non-finite entry in {name}")

    def __len__(self):
        return self.diag.shape[0]

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.upper, 1) + np.diag(self.lower, -1)


@njit(cache=True, nogil=True)
def _thomas(lower, diag, upper, rhs, x, cp, dp):
    """Forward elimination / back substitution into ``x``.

    Returns the index of the row with a negligible pivot, or -1 on success.
    """
    n = diag.shape[0]
    for k in range(n):
        scale = abs(diag[k])
        pivot = diag[k]
        d = rhs[k]
        if k > 0:
            scale = max(scale, abs(lower[k - 1]))
            pivot -= lower[k - 1] * cp[k - 1]
            d -= lower[k - 1] * dp[k - 1]
        if k < n - 1:
            scale = max(scale, abs(upper[k]))
        if abs(pivot) <= PIVOT_RTOL * scale or not np.isfinite(pivot):
            return k
        cp[k] = upper[k] / pivot if k < n - 1 else 0.0
        dp[k] = d / pivot
    x[n - 1] = dp[n - 1]
    for k in range(n - 2, -1, -1):
        x[k] = dp[k] - cp[k] * x[k + 1]
    return -1


def thomas_solve(sys: TridiagonalSystem) -> np.ndarray:
    """Solve a tridiagonal system in O(N); the input is left unmodified."""
    n = len(sys)
    x = np.empty(n)
    bad = _thomas(sys.lower, sys.diag, sys.upper, sys.rhs, x, np.empty(n), np.empty(n))
    if bad >= 0:
        raise SingularSystemError(f"zero pivot at row {bad} of {n}")
    return x


@njit(cache=True, nogil=True)
def _line_sweep(psi, interior, along, cross, omega, mode):
    """Sweep every line ``psi[:, j]`` for j = 1..n-2 in order.

    ``along`` couples neighbours on the line, ``cross`` couples the lines
    above and below. Returns ``(bad_line, min_margin)`` where ``bad_line`` is
    -1 unless a pivot failed and ``min_margin`` is the smallest diagonal
    dominance margin ``|diag| - |lower| - |upper|`` over assembled rows.
    """
    m, n = psi.shape
    diag_val = 2.0 * (along + cross)
    off = along if mode == _RELAX_AFTER else omega * along
    lower = np.empty(m)
    diag = np.empty(m)
    upper = np.empty(m)
    rhs = np.empty(m)
    x = np.empty(m)
    cp = np.empty(m)
    dp = np.empty(m)
    margin = np.inf
    for j in range(1, n - 1):
        i = 1
        while i < m - 1:
            if not interior[i, j]:
                i += 1
                continue
            start = i
            while i < m - 1 and interior[i, j]:
                i += 1
            size = i - start
            for k in range(size):
                p = start + k
                perp = cross * (psi[p, j + 1] + psi[p, j - 1])
                if mode == _RELAX_AFTER:
                    rhs[k] = perp
                else:
                    rhs[k] = diag_val * (1.0 - omega) * psi[p, j] + omega * perp
                diag[k] = diag_val
                if k < size - 1:
                    lower[k] = -off
                    upper[k] = -off
            rhs[0] += off * psi[start - 1, j]
            rhs[size - 1] += off * psi[i, j]
            if size >= 3:
                margin = min(margin, diag_val - 2.0 * abs(off))
            elif size == 2:
                margin = min(margin, diag_val - abs(off))
            else:
                margin = min(margin, diag_val)
            bad = _thomas(lower[: size - 1], diag[:size], upper[: size - 1], rhs[:size], x, cp, dp)
            if bad >= 0:
                return j, margin
            for k in range(size):
                p = start + k
                if mode == _RELAX_AFTER:
                    psi[p, j] = (1.0 - omega) * psi[p, j] + omega * x[k]
                else:
                    psi[p, j] = x[k]
    return -1, margin


def _run(psi, interior, along, cross, omega, mode, what):
    bad, margin = _line_sweep(psi, interior, float(along), float(cross), float(omega), mode)
    if bad >= 0:
        raise SingularSystemError(f"{what}: zero pivot while solving line {bad}")
    return margin


def slora_sweep(field, mask: BoundaryMask, omega: float) -> float:
    """Row sweep that solves each row unrelaxed, then relaxes the row.

    The row system is ``-psi[i-1] + 2(1+b^2) psi[i] - psi[i+1] = b^2 (psi[i,j+1] + psi[i,j-1])``
    and the update ``(1-w) psi_old + w psi_line``. Returns the smallest
    diagonal-dominance margin among the assembled systems.
    """
    psi = as_array(field)
    return _run(psi, mask.interior, 1.0, mask.grid.beta ** 2, omega, _RELAX_AFTER, "SLORA")


def slorb_sweep(field, mask: BoundaryMask, omega: float) -> float:
    """Row sweep with relaxation built into the row system.

    Solves ``-w psi[i-1] + 2(1+b^2) psi[i] - w psi[i+1]
    = 2(1+b^2)(1-w) psi_old[i] + w b^2 (psi[i,j+1] + psi[i,j-1])`` and takes the
    solution as the new row.
    """
    psi = as_array(field)
    return _run(psi, mask.interior, 1.0, mask.grid.beta ** 2, omega, _RELAX_INSIDE, "SLORB")


ADI_STYLES = {"inside": _RELAX_INSIDE, "after": _RELAX_AFTER}


def adi_row_sweep(field, mask: BoundaryMask, omega: float, style: str = "inside") -> float:
    psi = as_array(field)
    return _run(psi, mask.interior, 1.0, mask.grid.beta ** 2, omega, ADI_STYLES[style], "ADI row")


def adi_column_sweep(field, mask: BoundaryMask, omega: float, style: str = "inside") -> float:
    """Column-implicit sweep, columns left-to-right, bottom-up within each.

    Divided by ``dx^2`` the unrelaxed column system reads
    ``-b^2 psi[j-1] + 2(1+b^2) psi[j] - b^2 psi[j+1] = psi[i+1,j] + psi[i-1,j]``.
    """
    psi = as_array(field)
    return _run(psi.T, mask.interior.T, mask.grid.beta ** 2, 1.0, omega, ADI_STYLES[style], "ADI column")


def adi_cycle(field, mask: BoundaryMask, omega: float, style: str = "inside") -> float:
    """One ADI cycle: a row sweep followed by a column sweep.

    ``style="inside"`` folds relaxation into each line system as SLORB does;
    ``style="after"`` solves each line unrelaxed and then blends as SLORA
    does. The two coincide at ``omega = 1``.
    """
    if style not in ADI_STYLES:
        raise ValueError(f"unknown ADI style {style!r}; expected one of {sorted(ADI_STYLES)}")
    m1 = adi_row_sweep(field, mask, omega, style)
    m2 = adi_column_sweep(field, mask, omega, style)
    return min(m1, m2)
