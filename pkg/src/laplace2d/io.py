"""Problem JSON, field/history/trace CSV readers and writers.

Floats are written with ``repr`` so every finite value round-trips exactly.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .config import ConvergenceHistory
from .grid import BoundaryMask, GridSpec, ProblemSpec, ScalarField


class ProblemFormatError(ValueError):
    """Malformed problem or field file; the message names the bad entry."""


def problem_to_dict(problem: ProblemSpec) -> dict:
    g = problem.grid
    mask = problem.mask
    dirichlet = [
        {"i": int(i), "j": int(j), "value": float(mask.values[i, j])}
        for j in range(g.n)
        for i in range(g.m)
        if not mask.interior[i, j]
    ]
    return {"name": problem.name, "grid": {"m": g.m, "n": g.n, "dx": g.dx, "dy": g.dy}, "dirichlet": dirichlet}


def problem_from_dict(data: dict) -> ProblemSpec:
    try:
        gd = data["grid"]
        m, n = gd["m"], gd["n"]
        if not isinstance(m, int) or not isinstance(n, int):
            raise ProblemFormatError(f"grid.m and grid.n must be integers, got {m!r}, {n!r}")
        grid = GridSpec(m, n, float(gd["dx"]), float(gd["dy"]))
        entries = data["dirichlet"]
    except KeyError as exc:
        raise ProblemFormatError(f"missing key {exc}") from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ProblemFormatError):
            raise
        raise ProblemFormatError(f"bad grid: {exc}") from exc

    interior = np.ones(grid.shape, dtype=bool)
    values = np.zeros(grid.shape)
    imax = jmax = -1
    for k, e in enumerate(entries):
        try:
            i, j, v = e["i"], e["j"], float(e["value"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ProblemFormatError(f"dirichlet[{k}]: malformed entry {e!r}") from exc
        if not (isinstance(i, int) and isinstance(j, int)):
            raise ProblemFormatError(f"dirichlet[{k}]: indices must be integers, got ({i!r}, {j!r})")
        if not (0 <= i < grid.m and 0 <= j < grid.n):
            raise ProblemFormatError(f"dirichlet[{k}]: point ({i}, {j}) outside {grid.m}x{grid.n} grid")
        if not math.isfinite(v):
            raise ProblemFormatError(f"dirichlet[{k}]: non-finite value {v} at ({i}, {j})")
        interior[i, j] = False
        values[i, j] = v
        imax, jmax = max(imax, i), max(jmax, j)
    if (imax + 1, jmax + 1) != grid.shape:
        raise ProblemFormatError(
            f"dimension mismatch: Dirichlet points span {imax + 1}x{jmax + 1}, grid is {grid.m}x{grid.n}"
        )
    try:
        mask = BoundaryMask(grid, interior, values)
    except ValueError as exc:
        raise ProblemFormatError(str(exc)) from exc
    return ProblemSpec(grid, mask, str(data.get("name", "problem")))


def save_problem(problem: ProblemSpec, path) -> None:
    Path(path).write_text(json.dumps(problem_to_dict(problem), indent=1) + "\n")


def load_problem(path) -> ProblemSpec:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ProblemFormatError(f"{path}: top level must be an object")
    return problem_from_dict(data)


FIELD_HEADER = ["i", "j", "x", "y", "psi"]


def save_field(field: ScalarField, path) -> None:
    g = field.grid
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(FIELD_HEADER)
        for j in range(g.n):
            for i in range(g.m):
                w.writerow([i, j, repr(i * g.dx), repr(j * g.dy), repr(float(field.values[i, j]))])


def load_field(path) -> ScalarField:
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != FIELD_HEADER:
            raise ProblemFormatError(f"{path}: expected header {','.join(FIELD_HEADER)}, got {header}")
        for lineno, row in enumerate(reader, start=2):
            try:
                i, j = int(row[0]), int(row[1])
                x, y, psi = float(row[2]), float(row[3]), float(row[4])
            except (IndexError, ValueError) as exc:
                raise ProblemFormatError(f"{path}:{lineno}: malformed row {row}") from exc
            if not math.isfinite(psi):
                raise ProblemFormatError(f"{path}:{lineno}: non-finite psi at ({i}, {j})")
            rows.append((i, j, x, y, psi))
    if not rows:
        raise ProblemFormatError(f"{path}: no data rows")
    m = max(r[0] for r in rows) + 1
    n = max(r[1] for r in rows) + 1
    if len(rows) != m * n:
        raise ProblemFormatError(f"{path}: {len(rows)} rows for a {m}x{n} grid")
    values = np.full((m, n), np.nan)
    xs, ys = {}, {}
    for i, j, x, y, psi in rows:
        values[i, j] = psi
        xs[i], ys[j] = x, y
    if np.isnan(values).any():
        raise ProblemFormatError(f"{path}: duplicate or missing grid points")
    grid = GridSpec(m, n, xs[1] - xs[0], ys[1] - ys[0])
    return ScalarField(grid, values)


def _fmt(v: float) -> str:
    return repr(float(v))


def write_history(history: ConvergenceHistory, path) -> None:
    """``iter,error`` rows under a ``# method=..,omega=..,time_ms=..`` line.

    Non-finite errors are never written.
    """
    with open(path, "w", newline="") as fh:
        fh.write(
            f"# method={history.method},omega={history.omega:g},time_ms={history.time_ms:.6f},"
            f"converged={str(history.converged).lower()}\n"
        )
        w = csv.writer(fh)
        w.writerow(["iter", "error"])
        for k, e in enumerate(history.errors, start=1):
            if math.isfinite(e):
                w.writerow([k, _fmt(e)])


def read_history(path) -> tuple[dict, list[float]]:
    with open(path) as fh:
        meta_line = fh.readline().lstrip("#").strip()
        meta = dict(item.split("=", 1) for item in meta_line.split(","))
        reader = csv.reader(fh)
        next(reader)
        errors = [float(row[1]) for row in reader]
    return meta, errors


def write_trace(trace, path) -> None:
    """Multigrid per-cycle residual norms as ``cycle,level,phase,residual_norm``."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["cycle", "level", "phase", "residual_norm"])
        for rec in trace:
            for level, phase, norm in rec.residuals:
                w.writerow([rec.cycle, level + 1, phase, _fmt(norm)])
            # level-1 change over the whole cycle (the outer stopping measure)
            w.writerow([rec.cycle, 1, "cycle_change", _fmt(rec.error)])
