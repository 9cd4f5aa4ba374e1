"""Geometric V-cycle multigrid with Gauss-Seidel smoothing.

Level 0 carries the stream function itself. Every coarser level carries a
correction ``dpsi`` that solves ``L(dpsi) + R = 0``, where ``R`` is the
restricted defect of the level above; corrections vanish on Dirichlet points.
With three levels one cycle is:

    smooth psi (nu GS) -> R1 = L(psi) -> restrict to level 1
    smooth dpsi1 from zero -> R2 = R1 + L(dpsi1) -> restrict to level 2
    solve dpsi2 to convergence -> dpsi1 += prolong(dpsi2) -> smooth dpsi1
    psi += prolong(dpsi1) -> smooth psi
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .config import ConvergenceHistory, DivergenceError, MultigridError, SolverConfig
from .grid import BoundaryMask, GridSpec, ProblemSpec, ScalarField, SizingError
from .point import gauss_seidel_sweep
from .stencil import infinity_error, residual

DIVERGENCE_LIMIT = 1e12


@dataclass(frozen=True)
class MeshHierarchy:
    """Masks from finest (index 0) to coarsest.

    The finest mask holds the problem's Dirichlet values; coarser masks keep
    the same classification at coincident points with zero values.
    """

    levels: tuple[BoundaryMask, ...]

    def __len__(self):
        return len(self.levels)

    def __getitem__(self, k) -> BoundaryMask:
        return self.levels[k]

    @property
    def shapes(self) -> list[tuple[int, int]]:
        return [mask.grid.shape for mask in self.levels]


def coarsen_grid(grid: GridSpec) -> GridSpec:
    if (grid.m - 1) % 2 or (grid.n - 1) % 2:
        raise SizingError(f"{grid.m}x{grid.n} grid cannot be coarsened (m-1 and n-1 must be even)")
    return GridSpec((grid.m + 1) // 2, (grid.n + 1) // 2, 2 * grid.dx, 2 * grid.dy)


def build_hierarchy(problem: ProblemSpec, levels: int = 3) -> MeshHierarchy:
    if levels < 2:
        raise SizingError(f"need at least 2 levels, got {levels}")
    factor = 2 ** (levels - 1)
    g = problem.grid
    if (g.m - 1) % factor or (g.n - 1) % factor:
        raise SizingError(f"{g.m}x{g.n} grid is not coarsenable to {levels} levels")
    masks = [problem.mask]
    for _ in range(levels - 1):
        fine = masks[-1]
        cg = coarsen_grid(fine.grid)
        try:
            masks.append(BoundaryMask(cg, fine.interior[::2, ::2], np.zeros(cg.shape)))
        except ValueError as exc:
            raise SizingError(f"coarse level {cg.m}x{cg.n} is degenerate: {exc}") from exc
    return MeshHierarchy(tuple(masks))


def restrict(fine, coarse_mask: BoundaryMask | None = None) -> np.ndarray:
    """Injection: ``coarse[I, J] = fine[2I, 2J]``, zero at coarse Dirichlet points."""
    f = fine.values if isinstance(fine, ScalarField) else np.asarray(fine, dtype=float)
    coarse = f[::2, ::2].copy()
    if coarse_mask is not None:
        coarse[~coarse_mask.interior] = 0.0
    return coarse


def prolong(coarse, fine_mask: BoundaryMask | None = None) -> np.ndarray:
    """Bilinear interpolation to the grid with twice the resolution.

    Coincident points copy, edge midpoints average two coarse neighbours and
    cell centres average the two adjacent edge midpoints (equal to the mean
    of four corners, and exact for constants).
    """
    c = coarse.values if isinstance(coarse, ScalarField) else np.asarray(coarse, dtype=float)
    M, N = c.shape
    f = np.empty((2 * M - 1, 2 * N - 1))
    f[::2, ::2] = c
    f[1::2, ::2] = 0.5 * (c[:-1, :] + c[1:, :])
    f[:, 1::2] = 0.5 * (f[:, :-2:2] + f[:, 2::2])
    if fine_mask is not None:
        f[~fine_mask.interior] = 0.0
    return f


@dataclass
class CycleRecord:
    cycle: int
    residuals: list[tuple[int, str, float]] = field(default_factory=list)
    coarse_iterations: int = 0
    error: float = float("nan")


def _norm(r: np.ndarray) -> float:
    return float(np.max(np.abs(r)))


def _smooth(psi, mask, nu, source=None):
    for _ in range(nu):
        gauss_seidel_sweep(psi, mask, source)


def _coarse_solve(mask, source, tol, max_iter) -> tuple[np.ndarray, int]:
    delta = np.zeros(mask.grid.shape)
    for k in range(1, max_iter + 1):
        old = delta.copy()
        gauss_seidel_sweep(delta, mask, source)
        if infinity_error(delta, old) <= tol:
            return delta, k
    raise MultigridError(f"coarsest level did not converge in {max_iter} iterations")


def _correction(h: MeshHierarchy, level: int, forcing: np.ndarray, nu: int, rec: CycleRecord, cfg) -> np.ndarray:
    """Approximate ``dpsi`` with ``L(dpsi) + forcing = 0`` on ``level``."""
    mask = h[level]
    source = mask.grid.dx ** 2 * forcing
    rec.residuals.append((level, "initial", _norm(forcing)))
    if level == len(h) - 1:
        delta, its = _coarse_solve(mask, source, cfg.coarse_tol, cfg.coarse_max_iter)
        rec.coarse_iterations = its
        rec.residuals.append((level, "solved", _norm(residual(delta, mask, forcing))))
        return delta
    delta = np.zeros(mask.grid.shape)
    _smooth(delta, mask, nu, source)
    defect = residual(delta, mask, forcing)
    rec.residuals.append((level, "presmoothed", _norm(defect)))
    delta += prolong(_correction(h, level + 1, restrict(defect, h[level + 1]), nu, rec, cfg), mask)
    rec.residuals.append((level, "corrected", _norm(residual(delta, mask, forcing))))
    _smooth(delta, mask, nu, source)
    rec.residuals.append((level, "postsmoothed", _norm(residual(delta, mask, forcing))))
    return delta


def v_cycle(h: MeshHierarchy, field, nu: int = 3, config: SolverConfig | None = None, cycle: int = 1) -> CycleRecord:
    """Run one V-cycle on ``field`` in place and return its trace record."""
    cfg = config or SolverConfig(nu=nu, levels=len(h))
    psi = field.values if isinstance(field, ScalarField) else field
    mask = h[0]
    start = psi.copy()
    rec = CycleRecord(cycle)
    rec.residuals.append((0, "initial", _norm(residual(psi, mask))))
    _smooth(psi, mask, nu)
    r1 = residual(psi, mask)
    rec.residuals.append((0, "presmoothed", _norm(r1)))
    psi += prolong(_correction(h, 1, restrict(r1, h[1]), nu, rec, cfg), mask)
    rec.residuals.append((0, "corrected", _norm(residual(psi, mask))))
    _smooth(psi, mask, nu)
    rec.residuals.append((0, "postsmoothed", _norm(residual(psi, mask))))
    rec.error = infinity_error(psi, start)
    return rec


def solve_multigrid(
    problem: ProblemSpec, config: SolverConfig | None = None, initial: ScalarField | None = None
) -> tuple[ScalarField, ConvergenceHistory]:
    """Repeat V-cycles until the change over one cycle is at most ``tol``.

    The per-cycle trace is attached as ``history.trace``.
    """
    cfg = config or SolverConfig(method="mg")
    h = build_hierarchy(problem, cfg.levels)
    psi = problem.mask.values.copy() if initial is None else initial.values.copy()
    problem.mask.apply(psi)
    history = ConvergenceHistory("mg", 1.0, trace=[])
    t0 = time.perf_counter()
    for cycle in range(1, cfg.max_cycles + 1):
        rec = v_cycle(h, psi, cfg.nu, cfg, cycle)
        history.trace.append(rec)
        if not np.isfinite(rec.error) or rec.error > DIVERGENCE_LIMIT:
            history.iterations = len(history.errors)
            history.wall_time = time.perf_counter() - t0
            raise DivergenceError(cycle, rec.error, history)
        history.errors.append(rec.error)
        if rec.error <= cfg.tol:
            history.converged = True
            break
    history.iterations = len(history.errors)
    history.wall_time = time.perf_counter() - t0
    return ScalarField(problem.grid, psi), history
