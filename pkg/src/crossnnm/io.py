"""CSV formats: nodal fields (``x,y,value``) and convergence histories."""
from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from .grid import Grid, build_grid

FIELD_HEADER = ("x", "y", "value")
HISTORY_HEADER = (
    "iter",
    "l2_error",
    "broken_h1_error",
    "subdomain_sum_l2",
    "ratio",
    "psi_crosspoint_max",
    "status",
)


class FieldFileError(ValueError):
    pass


def fmt(v: float) -> str:
    """17 significant digits: enough for an exact float64 round trip."""
    return "nan" if math.isnan(v) else f"{v:.17g}"


def write_field_csv(path, grid: Grid, field) -> None:
    """One row per node, rows of constant ``y`` from bottom to top, ``x`` increasing."""
    field = np.asarray(field, dtype=float)
    if field.shape != grid.shape:
        raise ValueError(f"field has shape {field.shape}, grid expects {grid.shape}")
    X, Y = grid.xy
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(FIELD_HEADER)
        for jj in range(grid.shape[1]):
            for ii in range(grid.shape[0]):
                w.writerow((fmt(X[ii, jj]), fmt(Y[ii, jj]), fmt(field[ii, jj])))


def read_field_csv(path, grid: Grid | None = None) -> np.ndarray:
    """Read a nodal field.  Rows may come in any order but every lattice node
    must appear exactly once.  Without ``grid`` the lattice is inferred from
    the row count."""
    path = Path(path)
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(c.strip() for c in header) != FIELD_HEADER:
            raise FieldFileError(f"{path}:1: expected header 'x,y,value', got {header!r}")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 3:
                raise FieldFileError(f"{path}:{lineno}: expected 3 columns, got {len(row)}")
            try:
                x, y, v = (float(c) for c in row)
            except ValueError:
                raise FieldFileError(f"{path}:{lineno}: non-numeric entry in {row!r}") from None
            if not math.isfinite(v):
                raise FieldFileError(f"{path}:{lineno}: non-finite value {row[2]!r}")
            rows.append((lineno, x, y, v))

    if grid is None:
        side = math.isqrt(len(rows))
        if side * side != len(rows) or side % 2 == 0 or side < 5:
            raise FieldFileError(
                f"{path}: {len(rows)} nodes is not (2n+1)^2 for any n >= 2; cannot infer the grid"
            )
        grid = build_grid((side - 1) // 2)
    elif len(rows) != grid.num_nodes:
        raise FieldFileError(f"{path}: expected {grid.num_nodes} nodes for n={grid.n}, found {len(rows)}")

    out = np.full(grid.shape, np.nan)
    n = grid.n
    for lineno, x, y, v in rows:
        i, j = round(x * n), round(y * n)
        if abs(i) > n or abs(j) > n or abs(x - i * grid.h) > 1e-9 or abs(y - j * grid.h) > 1e-9:
            raise FieldFileError(f"{path}:{lineno}: ({x}, {y}) is not a node of the n={n} lattice")
        if not np.isnan(out[i + n, j + n]):
            raise FieldFileError(f"{path}:{lineno}: node ({x}, {y}) appears twice")
        out[i + n, j + n] = v
    return out


def write_history_csv(path, history) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(HISTORY_HEADER)
        last = len(history.records) - 1
        for idx, r in enumerate(history.records):
            status = history.status.value if idx == last else "running"
            w.writerow(
                (
                    r.k,
                    fmt(r.l2_error),
                    fmt(r.broken_h1_error),
                    fmt(r.subdomain_sum_l2),
                    fmt(r.ratio),
                    fmt(r.psi_crosspoint_max),
                    status,
                )
            )


def read_history_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
