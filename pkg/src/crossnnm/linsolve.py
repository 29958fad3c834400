"""Sparse storage and factorize-once / solve-many wrappers.

Matrices are held as canonical ``scipy.sparse.csr_matrix`` (sorted, unique
column indices).  The direct path is SuperLU; the CG path is for symmetric
positive definite systems that are too large to factor comfortably.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

PIVOT_RTOL = 1e-14
CG_RTOL = 1e-12
REFINE_STEPS = 1
# above this many unknowns "auto" switches from LU to CG
DIRECT_LIMIT = 250_000


class SingularMatrixError(ArithmeticError):
    pass


class ConvergenceError(ArithmeticError):
    pass


def as_sparse(a) -> sp.csr_matrix:
    """Canonical CSR copy of ``a`` (dense array or any scipy sparse format)."""
    m = sp.csr_matrix(a, dtype=float, copy=True)
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"matrix dimensions must be positive, got {m.shape}")
    m.sum_duplicates()
    m.sort_indices()
    return m


@dataclass(frozen=True, eq=False)
class Factorization:
    matrix: sp.csr_matrix
    method: str
    _lu: object = None

    @property
    def shape(self):
        return self.matrix.shape


def factorize(a, method: str = "auto") -> Factorization:
    """Prepare ``a`` for repeated solves.

    ``method`` is ``"direct"``, ``"cg"`` or ``"auto"``.  The direct path raises
    :class:`SingularMatrixError` if a pivot of the LU factor falls below
    ``1e-14 * max|A|``.
    """
    A = as_sparse(a)
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"matrix must be square, got {A.shape}")
    if method == "auto":
        method = "cg" if A.shape[0] > DIRECT_LIMIT else "direct"
    if method == "cg":
        return Factorization(A, "cg")
    if method != "direct":
        raise ValueError(f"unknown method {method!r}")

    amax = abs(A).max() if A.nnz else 0.0
    if amax == 0.0:
        raise SingularMatrixError("matrix is identically zero")
    try:
        lu = spla.splu(A.tocsc())
    except RuntimeError as exc:  # SuperLU reports exact zero pivots this way
        raise SingularMatrixError(str(exc)) from None
    pivots = np.abs(lu.U.diagonal())
    k = int(np.argmin(pivots))
    if pivots[k] <= PIVOT_RTOL * amax:
        raise SingularMatrixError(
            f"pivot {k} is {pivots[k]:.3e}, below {PIVOT_RTOL:g} * max|A| = {PIVOT_RTOL * amax:.3e}"
        )
    return Factorization(A, "direct", lu)


def solve(fact: Factorization, b) -> np.ndarray:
    b = np.asarray(b, dtype=float)
    n = fact.shape[0]
    if b.shape != (n,):
        raise ValueError(f"right-hand side has shape {b.shape}, expected ({n},)")
    if fact.method == "direct":
        x = fact._lu.solve(b)
        # iterative refinement: NNM error curves are read down to ~1e-13
        for _ in range(REFINE_STEPS):
            x += fact._lu.solve(b - fact.matrix @ x)
        return x
    if not np.any(b):
        return np.zeros(n)
    x, info = spla.cg(fact.matrix, b, rtol=CG_RTOL, atol=0.0, maxiter=10 * n)
    if info != 0:
        raise ConvergenceError(f"CG did not reach rtol={CG_RTOL:g} in {10 * n} iterations")
    return x
