"""Command-line front end: ``laplace2d {solve,compare,sweep,contour,bench}``.

Exit codes: 0 success/converged, 1 usage or input error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import contextlib
import dataclasses
import logging
import sys
from pathlib import Path

from . import bench as benchmod
from .config import DivergenceError, Method, SolverConfig, SolverError
from .contour import render_svg
from .grid import SizingError, paper_chamber_problem, symmetric_chamber_problem
from .io import ProblemFormatError, load_field, load_problem, save_field, write_history, write_trace
from .line import SingularSystemError
from .solver import solve
from .stencil import max_residual

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2

log = logging.getLogger("laplace2d")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_problem_args(p):
    src = p.add_mutually_exclusive_group()
    src.add_argument("--problem", type=Path, help="problem JSON file")
    src.add_argument("--preset", choices=["chamber", "symmetric"], default="chamber")
    p.add_argument("--top-value", type=float, default=1.0, help="psi on the walls other than AB (presets only)")


def _problem(args):
    if args.problem is not None:
        return load_problem(args.problem)
    if args.preset == "symmetric":
        return symmetric_chamber_problem(args.top_value)
    return paper_chamber_problem(args.top_value)


def _methods(text: str) -> list[Method]:
    try:
        return [Method(s.strip()) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _floats(text: str) -> list[float]:
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise UsageError(f"bad number list {text!r}") from exc


@contextlib.contextmanager
def _output(path):
    if path is None or str(path) == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def cmd_solve(args) -> int:
    problem = _problem(args)
    cfg = SolverConfig(method=args.method, omega=args.omega, tol=args.tol, max_iter=args.max_iter,
                       nu=args.nu, levels=args.levels, adi_style=args.adi_style)
    # load the compiled kernels first so time_ms measures the solve only
    logging.disable(logging.WARNING)
    try:
        with contextlib.suppress(SolverError, SingularSystemError):
            solve(problem, dataclasses.replace(cfg, max_iter=1, max_cycles=1))
    finally:
        logging.disable(logging.NOTSET)
    try:
        fld, hist = solve(problem, cfg)
    except (DivergenceError, SingularSystemError) as exc:
        hist = getattr(exc, "history", None)
        if args.out_history and hist is not None:
            write_history(hist, args.out_history)
        print(f"method={cfg.method.value} omega={cfg.omega:g} status=diverged ({exc})")
        return EXIT_NUMERICAL
    except SolverError as exc:
        print(f"method={cfg.method.value} status=failed ({exc})")
        return EXIT_NUMERICAL
    if args.out_field:
        save_field(fld, args.out_field)
    if args.out_history:
        write_history(hist, args.out_history)
    if args.out_trace and hist.trace is not None:
        write_trace(hist.trace, args.out_trace)
    print(
        f"method={hist.method} omega={hist.omega:g} iterations={hist.iterations} "
        f"converged={str(hist.converged).lower()} time_ms={hist.time_ms:.3f} "
        f"final_error={hist.final_error:.3e} max_residual={max_residual(fld, problem.mask):.3e}"
    )
    return EXIT_OK if hist.converged else EXIT_NUMERICAL


def cmd_compare(args) -> int:
    problem = _problem(args)
    methods = _methods(args.methods)
    omegas = _floats(args.omegas) if args.omegas else None
    if omegas is not None and len(omegas) != len(methods):
        raise UsageError(f"{len(methods)} methods but {len(omegas)} omegas")
    rows = benchmod.compare(problem, methods, omegas, tol=args.tol, max_iter=args.max_iter)
    with _output(args.out) as fh:
        benchmod.write_report(rows, fh)
    return EXIT_OK if all(r.converged for r in rows) else EXIT_NUMERICAL


def cmd_sweep(args) -> int:
    problem = _problem(args)
    try:
        omegas = benchmod.omega_grid(args.omega_from, args.omega_to, args.omega_step)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    result = benchmod.sweep(problem, args.method, omegas, tol=args.tol, max_iter=args.max_iter)
    with _output(args.out) as fh:
        benchmod.write_sweep(result, fh)
    best = result.argmin
    msg = f"argmin omega={best:g} iterations={result.best_iterations}" if best is not None else "no omega converged"
    print(f"# {result.method}: {msg}", file=sys.stderr if args.out in (None, "-") else sys.stdout)
    return EXIT_OK if best is not None else EXIT_NUMERICAL


def cmd_contour(args) -> int:
    if args.levels < 1:
        raise UsageError("--levels must be >= 1")
    fld = load_field(args.field)
    Path(args.out).write_text(render_svg(fld, args.levels))
    return EXIT_OK


def cmd_bench(args) -> int:
    problem = _problem(args)
    if args.repeat < 1:
        raise UsageError("--repeat must be >= 1")
    methods = _methods(args.methods)
    omegas = _floats(args.omegas) if args.omegas else None
    if omegas is not None and len(omegas) != len(methods):
        raise UsageError(f"{len(methods)} methods but {len(omegas)} omegas")
    rows = benchmod.bench(problem, methods, omegas, repeat=args.repeat)
    with _output(args.out) as fh:
        benchmod.write_bench(rows, fh)
    return EXIT_OK


ALL_METHODS = ",".join(m.value for m in Method)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="laplace2d", description="Iterative solvers for the 2D Laplace equation.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve one problem with one method")
    _add_problem_args(p)
    p.add_argument("--method", choices=[m.value for m in Method], default="gs")
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--max-iter", type=int, default=100_000)
    p.add_argument("--nu", type=int, default=3, help="multigrid smoothing sweeps")
    p.add_argument("--levels", type=int, default=3, help="multigrid levels")
    p.add_argument("--adi-style", choices=["inside", "after"], default="inside")
    p.add_argument("--out-field", type=Path)
    p.add_argument("--out-history", type=Path)
    p.add_argument("--out-trace", type=Path, help="multigrid per-cycle residual trace")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("compare", help="run several methods on one problem")
    _add_problem_args(p)
    p.add_argument("--methods", default=ALL_METHODS)
    p.add_argument("--omegas", help="comma list matching --methods (default all 1.0)")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--max-iter", type=int, default=100_000)
    p.add_argument("--out", help="report CSV (default stdout)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", help="iterations versus relaxation factor")
    _add_problem_args(p)
    p.add_argument("--method", choices=[m.value for m in Method if m.relaxed], default="sor")
    p.add_argument("--omega-from", type=float, default=1.0)
    p.add_argument("--omega-to", type=float, default=1.95)
    p.add_argument("--omega-step", type=float, default=0.05)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--max-iter", type=int, default=100_000)
    p.add_argument("--out", help="sweep CSV (default stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("contour", help="render psi iso-lines from a field CSV as SVG")
    p.add_argument("--field", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--levels", type=int, default=11)
    p.set_defaults(func=cmd_contour)

    p = sub.add_parser("bench", help="median wall time per method")
    _add_problem_args(p)
    p.add_argument("--methods", default=ALL_METHODS)
    p.add_argument("--omegas")
    p.add_argument("--repeat", type=int, default=10)
    p.add_argument("--out", help="bench CSV (default stdout)")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, ProblemFormatError, SizingError, OSError, ValueError) as exc:
        print(f"laplace2d {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
