"""Even/odd splitting of nodal fields under the point reflection (x, y) -> (-x, -y)."""
from __future__ import annotations

import enum

import numpy as np


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"


def _point_reflection(field):
    field = np.asarray(field, dtype=float)
    if field.ndim != 2 or field.shape[0] != field.shape[1] or field.shape[0] % 2 == 0:
        raise ValueError(f"expected a (2n+1, 2n+1) nodal array, got shape {field.shape}")
    return field, field[::-1, ::-1]


def decompose_even_odd(field):
    """Split a global nodal field into its even and odd symmetric parts.

    Both parts are built from the pair ``(f(p), f(-p))`` with the same
    operands, so ``even`` is exactly symmetric and ``odd`` exactly
    antisymmetric.  ``even + odd`` reproduces ``field`` to within one ulp
    (exactly whenever ``f(p) +/- f(-p)`` is representable).
    """
    f, fr = _point_reflection(field)
    even = 0.5 * (f + fr)
    odd = 0.5 * (f - fr)
    return even, odd


def recompose(even, odd):
    even = np.asarray(even, dtype=float)
    odd = np.asarray(odd, dtype=float)
    if even.shape != odd.shape:
        raise ValueError(f"grid mismatch: {even.shape} vs {odd.shape}")
    return even + odd


def symmetry_defect(field, kind: Parity) -> float:
    """``max |f(p) - f(-p)|`` for EVEN, ``max |f(p) + f(-p)|`` for ODD."""
    f, fr = _point_reflection(field)
    if Parity(kind) is Parity.EVEN:
        return float(np.max(np.abs(f - fr)))
    return float(np.max(np.abs(f + fr)))
