"""Method comparison, relaxation-factor sweeps and timing benchmarks."""

from __future__ import annotations

import csv
import os
import platform
import statistics
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .config import Method, SolverConfig, SolverError
from .grid import ProblemSpec, paper_chamber_problem
from .line import SingularSystemError
from .solver import solve
from .stencil import max_residual

REPORT_HEADER = ["method", "omega", "iterations", "half_sweeps", "converged", "wall_time_ms", "final_error", "max_residual"]
SWEEP_HEADER = ["omega", "iterations", "converged"]
BENCH_HEADER = ["method", "omega", "iterations", "repeat", "median_ms", "min_ms", "max_ms"]


@dataclass
class RunRow:
    method: str
    omega: float
    iterations: int
    converged: bool
    wall_time_ms: float
    final_error: float
    max_residual: float

    @property
    def half_sweeps(self) -> int:
        """Directional sweeps performed; an ADI cycle counts twice."""
        return 2 * self.iterations if self.method == Method.ADI.value else self.iterations

    def as_row(self) -> list:
        return [
            self.method, f"{self.omega:g}", self.iterations, self.half_sweeps, str(self.converged).lower(),
            f"{self.wall_time_ms:.6f}", repr(self.final_error), repr(self.max_residual),
        ]


@dataclass
class SweepResult:
    method: str
    points: list[tuple[float, int, bool]] = field(default_factory=list)

    @property
    def argmin(self) -> float | None:
        """Omega with the fewest iterations among converged points; ties go to the smaller omega."""
        ok = [(its, w) for w, its, conv in self.points if conv]
        return min(ok)[1] if ok else None

    @property
    def best_iterations(self) -> int | None:
        ok = [its for _, its, conv in self.points if conv]
        return min(ok) if ok else None


def thread_count() -> int:
    env = os.environ.get("LAPLACE_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_one(problem: ProblemSpec, config: SolverConfig) -> RunRow:
    """Solve once; numerical failures become unconverged rows with ``max_iter`` iterations."""
    try:
        fld, hist = solve(problem, config)
    except (SolverError, SingularSystemError) as exc:
        hist = getattr(exc, "history", None)
        errs = hist.errors if hist else []
        return RunRow(config.method.value, config.omega, config.max_iter, False,
                      hist.time_ms if hist else float("nan"), errs[-1] if errs else float("nan"), float("nan"))
    return RunRow(hist.method, hist.omega, hist.iterations, hist.converged, hist.time_ms,
                  hist.final_error, max_residual(fld, problem.mask))


def compare(problem: ProblemSpec, methods, omegas=None, **config) -> list[RunRow]:
    """Run each method once, in order, and sort rows by iterations."""
    methods = [Method(m) for m in methods]
    omegas = [1.0] * len(methods) if omegas is None else list(omegas)
    if len(omegas) != len(methods):
        raise ValueError(f"{len(methods)} methods but {len(omegas)} omegas")
    warmup()
    rows = [run_one(problem, SolverConfig(method=m, omega=w, **config)) for m, w in zip(methods, omegas)]
    return sorted(rows, key=lambda r: (r.iterations, r.method))


def omega_grid(start: float, stop: float, step: float) -> list[float]:
    if not step > 0:
        raise ValueError(f"omega step must be positive, got {step}")
    if stop < start:
        raise ValueError(f"omega range is empty: {start} > {stop}")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + k * step, 10) for k in range(count)]


def sweep(problem: ProblemSpec, method, omegas, threads: int | None = None, **config) -> SweepResult:
    """Solve at every omega; results are keyed by omega so thread order is irrelevant."""
    method = Method(method)
    warmup()

    def run(w):
        row = run_one(problem, SolverConfig(method=method, omega=w, **config))
        return w, row.iterations, row.converged

    with ThreadPoolExecutor(max_workers=threads or thread_count()) as pool:
        points = sorted(pool.map(run, omegas))
    return SweepResult(method.value, points)


def bench(problem: ProblemSpec, methods, omegas=None, repeat: int = 10) -> list[dict]:
    """Median wall time of ``repeat`` solves per method (solver time only, no I/O)."""
    methods = [Method(m) for m in methods]
    omegas = [1.0] * len(methods) if omegas is None else list(omegas)
    if len(omegas) != len(methods):
        raise ValueError(f"{len(methods)} methods but {len(omegas)} omegas")
    warmup()
    out = []
    for m, w in zip(methods, omegas):
        times, iters = [], set()
        for _ in range(repeat):
            row = run_one(problem, SolverConfig(method=m, omega=w))
            times.append(row.wall_time_ms)
            iters.add(row.iterations)
        out.append({
            "method": m.value, "omega": w, "iterations": iters.pop() if len(iters) == 1 else -1,
            "repeat": repeat, "median_ms": statistics.median(times), "min_ms": min(times), "max_ms": max(times),
        })
    return out


def machine_line() -> str:
    return (f"# machine={platform.machine()},system={platform.system()},python={sys.version.split()[0]},"
            f"numpy={np.__version__},cpus={os.cpu_count()}")


def warmup() -> None:
    """Compile every kernel once so timings and threads do not pay for it."""
    tiny = paper_chamber_problem()
    for m in Method:
        solve(tiny, SolverConfig(method=m, max_iter=1, max_cycles=1))
    solve(tiny, SolverConfig(method=Method.ADI, adi_style="after", max_iter=1))


def write_report(rows: list[RunRow], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(REPORT_HEADER)
    for r in rows:
        w.writerow(r.as_row())


def write_sweep(result: SweepResult, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for omega, its, conv in result.points:
        w.writerow([f"{omega:g}", its, str(conv).lower()])


def write_bench(rows: list[dict], fh) -> None:
    fh.write(machine_line() + "\n")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(BENCH_HEADER)
    for r in rows:
        w.writerow([r["method"], f"{r['omega']:g}", r["iterations"], r["repeat"],
                    f"{r['median_ms']:.6f}", f"{r['min_ms']:.6f}", f"{r['max_ms']:.6f}"])

