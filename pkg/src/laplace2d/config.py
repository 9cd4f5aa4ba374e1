"""Solver configuration, convergence records and solver failures."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field


class Method(str, enum.Enum):
    JACOBI = "jacobi"
    GS = "gs"
    SOR = "sor"
    SLORA = "slora"
    SLORB = "slorb"
    ADI = "adi"
    MULTIGRID = "mg"

    @property
    def relaxed(self) -> bool:
        return self in (Method.SOR, Method.SLORA, Method.SLORB, Method.ADI)

    @property
    def label(self) -> str:
        return _LABELS[self]


_LABELS = {
    Method.JACOBI: "Jacobi",
    Method.GS: "GS",
    Method.SOR: "SOR",
    Method.SLORA: "SLORA",
    Method.SLORB: "SLORB",
    Method.ADI: "ADI",
    Method.MULTIGRID: "Multigrid",
}


@dataclass(frozen=True)
class SolverConfig:
    """Method choice and stopping rule.

    ``omega`` is ignored by Jacobi, Gauss-Seidel and multigrid. ``adi_style``
    picks where ADI applies relaxation (see ``line.adi_cycle``). The multigrid
    fields (``nu``, ``levels``, ``coarse_tol``, ``coarse_max_iter``,
    ``max_cycles``) are ignored by everything else.
    """

    method: Method = Method.GS
    omega: float = 1.0
    tol: float = 1e-9
    max_iter: int = 100_000
    nu: int = 3
    levels: int = 3
    coarse_tol: float = 1e-10
    coarse_max_iter: int = 10_000
    max_cycles: int = 1000
    adi_style: str = "inside"
    debug: bool = False

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.method.relaxed and not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if self.nu < 1:
            raise ValueError(f"nu must be >= 1, got {self.nu}")
        if self.adi_style not in ("inside", "after"):
            raise ValueError(f"adi_style must be 'inside' or 'after', got {self.adi_style!r}")
        if self.levels < 2:
            raise ValueError(f"levels must be >= 2, got {self.levels}")


@dataclass
class ConvergenceHistory:
    """Per-iteration infinity-norm errors of one solve.

    For ADI one iteration is a full row+column cycle; for multigrid it is one
    V-cycle.
    """

    method: str
    omega: float
    errors: list[float] = field(default_factory=list)
    iterations: int = 0
    wall_time: float = 0.0
    converged: bool = False
    warnings: list[str] = field(default_factory=list)
    dominance_margins: list[float] = field(default_factory=list)
    trace: list | None = None

    @property
    def time_ms(self) -> float:
        return 1e3 * self.wall_time

    @property
    def final_error(self) -> float:
        return self.errors[-1] if self.errors else float("nan")


class SolverError(RuntimeError):
    pass


class DivergenceError(SolverError):
    """Iterates blew up; ``history`` holds the finite errors seen so far."""

    def __init__(self, iteration: int, error: float, history: ConvergenceHistory):
        super().__init__(f"{history.method} diverged at iteration {iteration} (error={error:.3g})")
        self.iteration = iteration
        self.history = history


class MultigridError(SolverError):
    pass
