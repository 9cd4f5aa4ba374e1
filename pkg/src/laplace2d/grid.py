"""Uniform grids, scalar fields and Dirichlet boundary masks.

Indexing is ``(i, j)`` with ``i`` along x (columns) and ``j`` along y (rows),
origin at the bottom-left corner. Arrays therefore have shape ``(m, n)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class SizingError(ValueError):
    """Grid dimensions that do not fit the requested spacing or coarsening."""


@dataclass(frozen=True)
class GridSpec:
    m: int
    n: int
    dx: float
    dy: float

    def __post_init__(self):
        if self.m < 3 or self.n < 3:
            raise SizingError(f"grid needs m, n >= 3, got {self.m}x{self.n}")
        if not (self.dx > 0 and self.dy > 0):
            raise SizingError(f"spacings must be positive, got dx={self.dx}, dy={self.dy}")
        if not math.isfinite(self.dx / self.dy):
            raise SizingError("dx/dy is not finite")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.m, self.n)

    @property
    def beta(self) -> float:
        return self.dx / self.dy

    @property
    def lx(self) -> float:
        return (self.m - 1) * self.dx

    @property
    def ly(self) -> float:
        return (self.n - 1) * self.dy

    @property
    def size(self) -> int:
        return self.m * self.n

    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(x, y)`` coordinate arrays of shape ``(m, n)``."""
        x = np.arange(self.m) * self.dx
        y = np.arange(self.n) * self.dy
        return np.meshgrid(x, y, indexing="ij")


def make_grid(lx: float, ly: float, dx: float, dy: float) -> GridSpec:
    """Size a grid from domain lengths and spacings.

    ``m = lx/dx + 1`` and ``n = ly/dy + 1``; both ratios must be integral to
    within 1e-9.
    """
    for name, v in (("lx", lx), ("ly", ly), ("dx", dx), ("dy", dy)):
        if not (v > 0 and math.isfinite(v)):
            raise SizingError(f"{name} must be positive and finite, got {v}")
    cells = []
    for length, step, axis in ((lx, dx, "x"), (ly, dy, "y")):
        ratio = length / step
        k = round(ratio)
        if abs(ratio - k) > 1e-9:
            raise SizingError(f"{axis}: length {length} is not a multiple of spacing {step}")
        cells.append(k)
    return GridSpec(cells[0] + 1, cells[1] + 1, float(dx), float(dy))


@dataclass
class ScalarField:
    """Stream-function values on a grid, ``values[i, j]``."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.shape:
            raise ValueError(f"field shape {self.values.shape} does not match grid {self.grid.shape}")

    @classmethod
    def zeros(cls, grid: GridSpec) -> ScalarField:
        return cls(grid, np.zeros(grid.shape))

    def copy(self) -> ScalarField:
        return ScalarField(self.grid, self.values.copy())


@dataclass(frozen=True, eq=False)
class BoundaryMask:
    """Per-point Interior/Dirichlet classification.

    ``interior[i, j]`` is True for unknowns; everywhere else ``values[i, j]``
    holds the prescribed Dirichlet value. ``values`` is zero at interior points.
    """

    grid: GridSpec
    interior: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        interior = np.array(self.interior, dtype=bool)
        values = np.array(self.values, dtype=float)
        if interior.shape != self.grid.shape or values.shape != self.grid.shape:
            raise ValueError(
                f"mask dimensions {interior.shape}/{values.shape} do not match grid {self.grid.shape}"
            )
        if interior[0, :].any() or interior[-1, :].any() or interior[:, 0].any() or interior[:, -1].any():
            raise ValueError("outer rectangle must be Dirichlet")
        if not interior.any():
            raise ValueError("mask has no interior points")
        if not np.isfinite(values[~interior]).all():
            raise ValueError("Dirichlet values must be finite")
        values[interior] = 0.0
        interior.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "interior", interior)
        object.__setattr__(self, "values", values)

    @classmethod
    def rectangle(cls, grid: GridSpec, edge_values: np.ndarray | None = None) -> BoundaryMask:
        """Plain rectangle: outer ring Dirichlet, everything else interior."""
        interior = np.zeros(grid.shape, dtype=bool)
        interior[1:-1, 1:-1] = True
        values = np.zeros(grid.shape) if edge_values is None else np.asarray(edge_values, dtype=float)
        return cls(grid, interior, values)

    @property
    def n_interior(self) -> int:
        return int(self.interior.sum())

    @property
    def n_dirichlet(self) -> int:
        return self.grid.size - self.n_interior

    def apply(self, values: np.ndarray) -> np.ndarray:
        """Overwrite Dirichlet points of ``values`` in place and return it."""
        np.copyto(values, self.values, where=~self.interior)
        return values

    def initial_field(self) -> ScalarField:
        """Zero interior with the Dirichlet values applied."""
        return ScalarField(self.grid, self.values.copy())

    def __eq__(self, other):
        if not isinstance(other, BoundaryMask):
            return NotImplemented
        return (
            self.grid == other.grid
            and np.array_equal(self.interior, other.interior)
            and np.array_equal(self.values, other.values)
        )


@dataclass(frozen=True)
class ProblemSpec:
    grid: GridSpec
    mask: BoundaryMask
    name: str = field(default="problem")

    def __post_init__(self):
        if self.mask.grid != self.grid:
            raise ValueError("mask grid does not match problem grid")


# Chamber geometry: 6 m x 4 m box, 0.25 m spacing, gaps of one spacing next
# to the bottom corners A and B.
CHAMBER_LX, CHAMBER_LY, CHAMBER_H = 6.0, 4.0, 0.25


def _chamber_edges(grid: GridSpec, top_value: float, symmetric: bool) -> np.ndarray:
    m, n = grid.shape
    v = np.zeros(grid.shape)
    # side walls carry top_value; wall AB (j=0) is zero
    v[0, :] = top_value
    v[-1, :] = top_value
    v[:, -1] = 0.0 if symmetric else top_value
    v[:, 0] = 0.0
    # gap point above each bottom corner takes the mean of the two walls
    gap = 0.5 * (0.0 + top_value)
    v[0, 1] = v[-1, 1] = gap
    if symmetric:
        v[0, n - 2] = v[-1, n - 2] = gap
    return v


def paper_chamber_problem(top_value: float = 1.0) -> ProblemSpec:
    """25x17 chamber with psi=0 on the bottom wall and ``top_value`` elsewhere.

    The inlet/outlet gaps are the single side-wall points at ``j=1`` next to
    the bottom corners; they hold ``top_value / 2``. Corners belong to the
    bottom wall.
    """
    grid = make_grid(CHAMBER_LX, CHAMBER_LY, CHAMBER_H, CHAMBER_H)
    mask = BoundaryMask.rectangle(grid, _chamber_edges(grid, top_value, symmetric=False))
    return ProblemSpec(grid, mask, name="chamber")


def symmetric_chamber_problem(top_value: float = 1.0) -> ProblemSpec:
    """Chamber variant whose top wall mirrors the bottom wall (psi=0 and gaps)."""
    grid = make_grid(CHAMBER_LX, CHAMBER_LY, CHAMBER_H, CHAMBER_H)
    mask = BoundaryMask.rectangle(grid, _chamber_edges(grid, top_value, symmetric=True))
    return ProblemSpec(grid, mask, name="symmetric")
