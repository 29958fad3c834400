"""Data for the two benchmark problems and a manufactured solution."""
from __future__ import annotations

import numpy as np

from .grid import Grid


def build_example1(grid: Grid):
    """Even data: ``f = 1``, ``g = 0``."""
    return np.ones(grid.shape), np.zeros(grid.shape)


def angular_source(grid: Grid) -> np.ndarray:
    """``sin(2 phi)`` on the open third quadrant, ``-sin(2 phi)`` on the open
    first quadrant, zero elsewhere (including both axes).

    ``sin(2 phi)`` is evaluated as ``2xy / (x^2 + y^2)`` so that the field is
    odd to the last bit.
    """
    X, Y = grid.xy
    out = np.zeros(grid.shape)
    q1 = (X < 0) & (Y < 0)
    q3 = (X > 0) & (Y > 0)
    s2 = np.zeros(grid.shape)
    off = (X != 0) | (Y != 0)
    s2[off] = 2.0 * X[off] * Y[off] / (X[off] ** 2 + Y[off] ** 2)
    out[q1] = s2[q1]
    out[q3] = -s2[q3]
    return out


def build_example2(grid: Grid):
    """Odd data: ``f = x + y + angular_source``, ``g = 0``."""
    X, Y = grid.xy
    return X + Y + angular_source(grid), np.zeros(grid.shape)


def sine_manufactured(grid: Grid):
    """``u = sin(pi x) sin(pi y)``: returns ``(f, g, u)`` with ``f = 2 pi^2 u``."""
    X, Y = grid.xy
    u = np.sin(np.pi * X) * np.sin(np.pi * Y)
    return 2.0 * np.pi ** 2 * u, np.zeros(grid.shape), u
