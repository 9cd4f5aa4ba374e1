"""Iterate-to-convergence driver shared by every method."""

from __future__ import annotations

import logging
import math
import time

import numpy as np

from .config import ConvergenceHistory, DivergenceError, Method, SolverConfig
from .grid import ProblemSpec, ScalarField
from .line import adi_cycle, slora_sweep, slorb_sweep
from .multigrid import DIVERGENCE_LIMIT, solve_multigrid
from .point import gauss_seidel_sweep, jacobi_sweep, sor_sweep
from .stencil import infinity_error

log = logging.getLogger(__name__)


def _stepper(method: Method, mask, omega: float, adi_style: str = "inside"):
    """Return ``step(psi) -> (psi, dominance_margin)`` for one iteration."""
    if method is Method.JACOBI:
        return lambda psi: (jacobi_sweep(psi, mask), None)
    if method is Method.GS:
        return lambda psi: (gauss_seidel_sweep(psi, mask), None)
    if method is Method.SOR:
        return lambda psi: (sor_sweep(psi, mask, omega), None)
    if method is Method.SLORA:
        return lambda psi: (psi, slora_sweep(psi, mask, omega))
    if method is Method.SLORB:
        return lambda psi: (psi, slorb_sweep(psi, mask, omega))
    if method is Method.ADI:
        return lambda psi: (psi, adi_cycle(psi, mask, omega, adi_style))
    raise ValueError(f"no sweep for {method}")


def solve(
    problem: ProblemSpec, config: SolverConfig | None = None, initial: ScalarField | None = None
) -> tuple[ScalarField, ConvergenceHistory]:
    """Iterate the configured method until ``max|psi_new - psi_old| <= tol``.

    Starts from ``initial`` or, by default, from a zero interior with the
    Dirichlet values applied. Returns the final field and its history; the
    history is marked unconverged if ``max_iter`` is reached first.

    Raises
    ------
    DivergenceError
        When the iteration error turns non-finite or exceeds 1e12.
    """
    cfg = config or SolverConfig()
    if cfg.method is Method.MULTIGRID:
        return solve_multigrid(problem, cfg, initial)

    mask = problem.mask
    if initial is None:
        psi = mask.values.copy()
    else:
        if initial.grid != problem.grid:
            raise ValueError("initial field grid does not match problem")
        psi = mask.apply(initial.values.copy())

    omega = cfg.omega if cfg.method.relaxed else 1.0
    history = ConvergenceHistory(cfg.method.value, omega)
    if cfg.method.relaxed and omega >= 2.0:
        msg = f"omega={omega} >= 2: iteration may be unstable"
        history.warnings.append(msg)
        log.warning(msg)

    step = _stepper(cfg.method, mask, omega, cfg.adi_style)
    t0 = time.perf_counter()
    for k in range(1, cfg.max_iter + 1):
        old = psi.copy()
        psi, margin = step(psi)
        err = infinity_error(psi, old)
        if not math.isfinite(err) or err > DIVERGENCE_LIMIT:
            history.iterations = len(history.errors)
            history.wall_time = time.perf_counter() - t0
            raise DivergenceError(k, err, history)
        history.errors.append(err)
        if cfg.debug and margin is not None:
            history.dominance_margins.append(margin)
            if margin <= 0:
                log.warning("iteration %d: line system not diagonally dominant (margin %.3g)", k, margin)
        if err <= cfg.tol:
            history.converged = True
            break
    history.wall_time = time.perf_counter() - t0
    history.iterations = len(history.errors)
    if not np.isfinite(psi).all():
        raise DivergenceError(history.iterations, float("nan"), history)
    return ScalarField(problem.grid, psi), history
