"""Command-line experiment runner.

    python -m crossnnm.cli --method new --example 2 --theta 0.23 --n 50 --out run/

Writes ``history.csv`` (and, with ``--emit-fields``, ``solution.csv``,
``error.csv`` and ``psi.csv``) into ``--out``.  Exit codes: 0 converged,
2 hit ``--max-iter``, 3 diverged, 1 solver or I/O failure, 64 bad usage.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import fd, io, nnm, problems
from .grid import build_grid

EXIT_CONVERGED = 0
EXIT_FAILED = 1
EXIT_MAX_ITER = 2
EXIT_DIVERGED = 3
EXIT_USAGE = 64

_EXIT = {
    nnm.Status.CONVERGED: EXIT_CONVERGED,
    nnm.Status.MAX_ITERATIONS: EXIT_MAX_ITER,
    nnm.Status.DIVERGED: EXIT_DIVERGED,
    nnm.Status.FAILED: EXIT_FAILED,
}


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    method: str = "new"
    example: str = "1"
    theta: float = 0.25
    n: int = 100
    max_iter: int = 50
    tol: float = 1e-10
    output_dir: Path = Path("nnm_out")
    emit_fields: bool = False
    f_file: Path | None = None
    g_file: Path | None = None

    def __post_init__(self):
        if self.method not in {m.value for m in nnm.Method}:
            raise UsageError(f"unknown method {self.method!r}")
        if self.example not in ("1", "2", "custom"):
            raise UsageError(f"unknown example {self.example!r}")
        if self.n < 2:
            raise UsageError("--n must be >= 2")
        if self.max_iter < 1:
            raise UsageError("--max-iter must be >= 1")
        if not (self.tol > 0 and math.isfinite(self.tol)):
            raise UsageError("--tol must be a positive number")
        if not math.isfinite(self.theta):
            raise UsageError("--theta must be finite")
        if self.example == "custom" and self.f_file is None:
            raise UsageError("--example custom needs --f-file")
        if self.example != "custom" and (self.f_file or self.g_file):
            raise UsageError("--f-file/--g-file only apply to --example custom")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="crossnnm", description="Neumann-Neumann iterations with one cross-point.")
    p.add_argument("--method", choices=[m.value for m in nnm.Method], default="new")
    p.add_argument("--example", choices=["1", "2", "custom"], default="1")
    p.add_argument("--theta", type=float, default=0.25, help="relaxation parameter")
    p.add_argument("--n", type=int, default=100, help="nodes per half-axis; meshsize 1/n")
    p.add_argument("--max-iter", type=int, default=50)
    p.add_argument("--tol", type=float, default=1e-10, help="stop when error <= tol * initial error")
    p.add_argument("--out", type=Path, default=Path("nnm_out"))
    p.add_argument("--emit-fields", action="store_true")
    p.add_argument("--f-file", type=Path, help="source term as x,y,value CSV (custom example)")
    p.add_argument("--g-file", type=Path, help="boundary data as x,y,value CSV (custom example, default 0)")
    return p


def _data(cfg: RunConfig, grid):
    if cfg.example == "1":
        return problems.build_example1(grid)
    if cfg.example == "2":
        return problems.build_example2(grid)
    f = io.read_field_csv(cfg.f_file, grid)
    g = io.read_field_csv(cfg.g_file, grid) if cfg.g_file else np.zeros(grid.shape)
    return f, g


def run_experiment(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    if not 0 < cfg.theta < 0.5:
        print(f"warning: theta={cfg.theta:g} is outside (0, 1/2), where convergence is proven", file=err)
    grid = build_grid(cfg.n)
    try:
        f, g = _data(cfg, grid)
    except (OSError, io.FieldFileError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_FAILED

    result = nnm.run(grid, f, g, cfg.method, cfg.theta, cfg.max_iter, cfg.tol)
    hist = result.history
    try:
        cfg.output_dir.mkdir(parents=True, exist_ok=True)
        io.write_history_csv(cfg.output_dir / "history.csv", hist)
        if cfg.emit_fields and result.state is not None:
            e = nnm.errors(grid, result.reference, result.state.u)
            io.write_field_csv(cfg.output_dir / "solution.csv", grid, fd.glue(grid, result.state.u))
            io.write_field_csv(cfg.output_dir / "error.csv", grid, fd.glue(grid, e))
            io.write_field_csv(cfg.output_dir / "psi.csv", grid, fd.glue(grid, result.state.psi))
    except OSError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_FAILED

    last = hist.records[-1] if hist.records else None
    print(f"status: {hist.status.value}" + (f" ({hist.message})" if hist.message else ""), file=out)
    if last is not None:
        print(f"iterations: {last.k}  final l2 error: {last.l2_error:.6e}", file=out)
    measured = hist.asymptotic_ratio()
    shown = "n/a" if math.isnan(measured) else f"{measured:.10f}"
    print(f"asymptotic ratio: {shown}  |1-4*theta| = {nnm.RunHistory.expected_ratio(cfg.theta):.10f}", file=out)
    return _EXIT[hist.status]


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            method=args.method,
            example=args.example,
            theta=args.theta,
            n=args.n,
            max_iter=args.max_iter,
            tol=args.tol,
            output_dir=args.out,
            emit_fields=args.emit_fields,
            f_file=args.f_file,
            g_file=args.g_file,
        )
    except UsageError as exc:
        print(f"crossnnm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run_experiment(cfg)


if __name__ == "__main__":
    sys.exit(main())
