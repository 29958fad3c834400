"""Five-point finite differences on the four closed subdomains and on the whole square.

All subdomain systems share one closed-block operator ``K``: the five-point
stencil with every missing neighbour replaced by a ghost value eliminated
through a Neumann condition.  Rows of ``K`` are

* interior node:  ``4 u0 - uW - uE - uS - uN``
* edge node:      ``4 u0 - uL - uR - 2 u_in``
* corner node:    ``4 u0 - 2 u_in1 - 2 u_in2``

and equal ``h^2 f + 2h (sum of outward normal derivatives)``.  Only rows of
non-Dirichlet nodes are ever used.  Scaling edge rows by 1/2 and corner rows by
1/4 makes the reduced matrix symmetric positive definite.

The discrete normal derivative returned by :func:`extract_flux` is the
residual of that same row, so a Neumann solve with extracted fluxes returns the
field the fluxes came from.  At the cross-point the corner residual is split
evenly between the two edges.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

import numpy as np
import scipy.sparse as sp

from . import linsolve
from .grid import Grid, InterfaceId, SubdomainId


class TraceKind(enum.Enum):
    DIRICHLET = "dirichlet"
    FLUX = "flux"


@dataclass(frozen=True, eq=False)
class Trace:
    """Nodal data along one interface arm, ordered outer endpoint -> cross-point.

    A DIRICHLET trace has ``n + 1`` values (both endpoints).  A FLUX trace has
    ``n`` values: it skips the outer endpoint, which always carries the outer
    Dirichlet condition, and its last entry is this edge's share of the
    cross-point flux.
    """

    interface: InterfaceId
    kind: TraceKind
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 1:
            raise ValueError("trace values must be one-dimensional")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "interface", InterfaceId(self.interface))
        object.__setattr__(self, "kind", TraceKind(self.kind))

    def expected_length(self, n: int) -> int:
        return n + 1 if self.kind is TraceKind.DIRICHLET else n

    def __add__(self, other):
        self._compatible(other)
        return Trace(self.interface, self.kind, self.values + other.values)

    def __sub__(self, other):
        self._compatible(other)
        return Trace(self.interface, self.kind, self.values - other.values)

    def __mul__(self, c):
        return Trace(self.interface, self.kind, c * self.values)

    __rmul__ = __mul__

    def _compatible(self, other):
        if other.interface is not self.interface or other.kind is not self.kind:
            raise ValueError("traces live on different interfaces or have different kinds")


def dirichlet(interface, values) -> Trace:
    return Trace(interface, TraceKind.DIRICHLET, values)


def flux(interface, values) -> Trace:
    return Trace(interface, TraceKind.FLUX, values)


# per-subdomain boundary conditions on the two interface edges
EdgeBc = Mapping[InterfaceId, Trace]


@dataclass(frozen=True)
class CornerPolicy:
    """Which value a node gets where two edge conditions meet.

    ``dd_rule="average"``: two Dirichlet values are averaged.
    ``dn_rule="dirichlet"``: a Dirichlet value beats a Neumann condition.
    """

    dd_rule: str = "average"
    dn_rule: str = "dirichlet"

    def __post_init__(self):
        if self.dd_rule != "average":
            raise ValueError(f"unsupported dd_rule {self.dd_rule!r}")
        if self.dn_rule != "dirichlet":
            raise ValueError(f"unsupported dn_rule {self.dn_rule!r}")


DEFAULT_CORNERS = CornerPolicy()


@dataclass(frozen=True, eq=False)
class SubField:
    """Nodal values on one closed subdomain, local array ``(n+1, n+1)``.

    ``values[a, b]`` sits at lattice node ``sub_origin + (a, b)``.
    """

    sub: SubdomainId
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "sub", SubdomainId(self.sub))
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError(f"subfield must be square, got shape {v.shape}")
        object.__setattr__(self, "values", v)

    def __add__(self, other):
        self._compatible(other)
        return SubField(self.sub, self.values + other.values)

    def __sub__(self, other):
        self._compatible(other)
        return SubField(self.sub, self.values - other.values)

    def __mul__(self, c):
        return SubField(self.sub, c * self.values)

    __rmul__ = __mul__

    def __neg__(self):
        return SubField(self.sub, -self.values)

    def _compatible(self, other):
        if other.sub != self.sub or other.values.shape != self.values.shape:
            raise ValueError("subfields live on different subdomains or grids")


def restrict(grid: Grid, field, sub: SubdomainId) -> SubField:
    field = _global(grid, field)
    return SubField(sub, field[grid.sub_slice(sub)].copy())


def _global(grid: Grid, field) -> np.ndarray:
    field = np.asarray(field, dtype=float)
    if field.shape != grid.shape:
        raise ValueError(f"field has shape {field.shape}, grid expects {grid.shape}")
    return field


def _check_subfield(grid: Grid, sf: SubField):
    if sf.values.shape != (grid.n + 1, grid.n + 1):
        raise ValueError(f"subfield shape {sf.values.shape} does not match n={grid.n}")


# -- operators ------------------------------------------------------------


def _ghost_tridiag(m: int) -> sp.csr_matrix:
    main = 2.0 * np.ones(m)
    off = -np.ones(m - 1)
    T = sp.diags([off, main, off], [-1, 0, 1], format="lil")
    T[0, 1] = -2.0
    T[m - 1, m - 2] = -2.0
    return T.tocsr()


@lru_cache(maxsize=None)
def _block_operator(m: int):
    """``(K, w)`` for an ``m x m`` block, with ghost elimination on all sides."""
    T = _ghost_tridiag(m)
    eye = sp.identity(m, format="csr")
    K = (sp.kron(T, eye) + sp.kron(eye, T)).tocsr()
    w1 = np.ones(m)
    w1[0] = w1[-1] = 0.5
    w = np.outer(w1, w1).ravel()
    return K, w


def _edge_role(grid: Grid, sub: SubdomainId, iface: InterfaceId):
    a, b = grid.edge_local_indices(sub, iface)
    return a, b


class _SubdomainSystem:
    """Reduced, factorized system of one subdomain for a fixed D/N pattern."""

    def __init__(self, grid: Grid, sub: SubdomainId, kinds: tuple, method: str):
        n = grid.n
        m = n + 1
        K, w = _block_operator(m)
        self.grid, self.sub, self.kinds = grid, sub, dict(kinds)

        unknown = np.zeros((m, m), dtype=bool)
        unknown[1:-1, 1:-1] = True
        neumann = [iid for iid, k in self.kinds.items() if k is TraceKind.FLUX]
        for iid in neumann:
            a, b = grid.edge_local_indices(sub, iid)
            unknown[a[1:-1], b[1:-1]] = True
        if len(neumann) == 2:
            a, b = grid.edge_local_indices(sub, neumann[0])
            unknown[a[-1], b[-1]] = True

        flat = unknown.ravel()
        self.unknown = flat
        self.unk = np.flatnonzero(flat)
        self.known = np.flatnonzero(~flat)
        WK = sp.diags(w) @ K
        rows = WK[self.unk]
        self.A = linsolve.factorize(rows[:, self.unk], method=method)
        self.B = rows[:, self.known].tocsr()
        self.w_unk = w[self.unk]

    def solve(self, f_loc, fixed, neumann_rhs):
        h = self.grid.h
        rhs = self.w_unk * (h * h * f_loc.ravel()[self.unk] + 2.0 * h * neumann_rhs.ravel()[self.unk])
        rhs -= self.B @ fixed.ravel()[self.known]
        out = fixed.ravel().copy()
        out[self.unk] = linsolve.solve(self.A, rhs)
        return out.reshape(fixed.shape)


@lru_cache(maxsize=64)
def _subdomain_system(grid: Grid, sub: SubdomainId, kinds: tuple, method: str) -> _SubdomainSystem:
    return _SubdomainSystem(grid, sub, kinds, method)


def solve_subdomain(
    grid: Grid,
    sub: SubdomainId,
    f,
    g,
    bc: EdgeBc,
    corner_policy: CornerPolicy = DEFAULT_CORNERS,
    method: str = "auto",
) -> SubField:
    """Five-point solve on closed subdomain ``sub``.

    ``f`` and ``g`` are global nodal arrays; only ``g`` on the outer boundary
    of ``sub`` is read.  ``bc`` maps both interface arms of ``sub`` to a
    DIRICHLET trace or a FLUX trace (outward normal derivative).
    """
    sub = SubdomainId(sub)
    n = grid.n
    f = _global(grid, f)
    g = _global(grid, g)
    edges = grid.sub_interfaces(sub)
    missing = [e for e in edges if e not in bc]
    if missing:
        raise ValueError(f"subdomain {int(sub)}: no condition on {[e.value for e in missing]}")
    extra = set(bc) - set(edges)
    if extra:
        raise ValueError(f"subdomain {int(sub)}: {sorted(e.value for e in extra)} are not its edges")
    for iid in edges:
        tr = bc[iid]
        if tr.interface is not iid:
            raise ValueError(f"trace for {tr.interface.value} given on {iid.value}")
        if tr.values.shape[0] != tr.expected_length(n):
            raise ValueError(
                f"{tr.kind.value} trace on {iid.value} has {tr.values.shape[0]} values, "
                f"expected {tr.expected_length(n)}"
            )

    sl = grid.sub_slice(sub)
    f_loc = f[sl]
    fixed = np.zeros((n + 1, n + 1))
    fixed[0, :] = g[sl][0, :]
    fixed[-1, :] = g[sl][-1, :]
    fixed[:, 0] = g[sl][:, 0]
    fixed[:, -1] = g[sl][:, -1]
    gn = np.zeros((n + 1, n + 1))

    kinds = tuple((iid, bc[iid].kind) for iid in edges)
    cross_vals = []
    for iid in edges:
        tr = bc[iid]
        a, b = grid.edge_local_indices(sub, iid)
        if tr.kind is TraceKind.DIRICHLET:
            fixed[a[1:-1], b[1:-1]] = tr.values[1:-1]
            # interface / outer-boundary junction: two Dirichlet values meet
            fixed[a[0], b[0]] = 0.5 * (fixed[a[0], b[0]] + tr.values[0])
            cross_vals.append(tr.values[-1])
        else:
            gn[a[1:-1], b[1:-1]] = tr.values[:-1]
            gn[a[-1], b[-1]] += tr.values[-1]
    a, b = grid.edge_local_indices(sub, edges[0])
    ca, cb = a[-1], b[-1]
    if len(cross_vals) == 2:
        fixed[ca, cb] = 0.5 * (cross_vals[0] + cross_vals[1])
    elif len(cross_vals) == 1:
        fixed[ca, cb] = cross_vals[0]
        gn[ca, cb] = 0.0

    system = _subdomain_system(grid, sub, kinds, method)
    return SubField(sub, system.solve(f_loc, fixed, gn))


def extract_flux(grid: Grid, sub: SubdomainId, field: SubField, f, edge: InterfaceId) -> Trace:
    """Discrete outward normal derivative of ``field`` along ``edge``.

    Node values are ``(h/2) * ((K u)/h^2 - f)`` with the ghost-eliminated row
    ``K``; the last entry is half of the cross-point corner residual.
    """
    sub = SubdomainId(sub)
    edge = InterfaceId(edge)
    if edge not in grid.sub_interfaces(sub):
        raise ValueError(f"{edge.value} is not adjacent to subdomain {int(sub)}")
    if field.sub != sub:
        raise ValueError(f"field belongs to subdomain {int(field.sub)}, not {int(sub)}")
    _check_subfield(grid, field)
    h = grid.h
    K, _ = _block_operator(grid.n + 1)
    a, b = grid.edge_local_indices(sub, edge)
    a, b = a[1:], b[1:]
    flat = a * (grid.n + 1) + b
    Ku = K[flat] @ field.values.ravel()
    f_loc = _global(grid, f)[grid.sub_slice(sub)]
    r = 0.5 * h * (Ku / (h * h) - f_loc[a, b])
    r[-1] *= 0.5
    return Trace(edge, TraceKind.FLUX, r)


def zero_source(grid: Grid) -> np.ndarray:
    return np.zeros(grid.shape)


# -- monolithic ------------------------------------------------------------


@lru_cache(maxsize=8)
def _monolithic_system(grid: Grid, method: str):
    m = 2 * grid.n + 1
    K, _ = _block_operator(m)
    inner = ~grid.outer_mask.ravel()
    unk = np.flatnonzero(inner)
    known = np.flatnonzero(~inner)
    rows = K[unk]
    return unk, known, linsolve.factorize(rows[:, unk], method=method), rows[:, known].tocsr()


def monolithic_solve(grid: Grid, f, g, method: str = "auto") -> np.ndarray:
    """Five-point solution of ``-Lap u = f`` on the whole square, ``u = g`` on its boundary."""
    f = _global(grid, f)
    g = _global(grid, g)
    unk, known, A, B = _monolithic_system(grid, method)
    h = grid.h
    out = np.where(grid.outer_mask, g, 0.0).ravel()
    rhs = h * h * f.ravel()[unk] - B @ out[known]
    out[unk] = linsolve.solve(A, rhs)
    return out.reshape(grid.shape)


# -- norms -----------------------------------------------------------------


def l2_norm(grid: Grid, field) -> float:
    """``h * sqrt(sum field^2)`` over the field's own node set."""
    v = field.values if isinstance(field, SubField) else np.asarray(field, dtype=float)
    return float(grid.h * np.sqrt(np.sum(v * v)))


def _four(fields):
    fields = list(fields.values()) if isinstance(fields, Mapping) else list(fields)
    subs = sorted(int(sf.sub) for sf in fields)
    if subs != [1, 2, 3, 4]:
        raise ValueError(f"need one subfield per subdomain 1..4, got {subs}")
    return fields


def broken_h1_norm(grid: Grid, fields) -> float:
    """Sum over subdomains of the discrete H1 norm; differences never cross an interface."""
    total = 0.0
    for sf in _four(fields):
        _check_subfield(grid, sf)
        v = sf.values
        grad2 = np.sum(np.diff(v, axis=0) ** 2) + np.sum(np.diff(v, axis=1) ** 2)
        total += np.sqrt(l2_norm(grid, sf) ** 2 + grad2)
    return float(total)


@lru_cache(maxsize=None)
def _share_weights(grid: Grid, sub: SubdomainId) -> np.ndarray:
    """1/(number of closed subdomains containing the node), on ``sub``'s block."""
    w = np.ones((grid.n + 1, grid.n + 1))
    for iid in grid.sub_interfaces(sub):
        a, b = grid.edge_local_indices(sub, iid)
        w[a, b] *= 0.5
    w.flags.writeable = False
    return w


def glued_l2_norm(grid: Grid, fields) -> float:
    """Global nodal L2 norm of a field given piecewise on the four subdomains.

    Nodes shared by several subdomains contribute the mean of their squared
    values, so a single-valued field gives exactly ``l2_norm`` of its global array.
    """
    s = 0.0
    for sf in _four(fields):
        _check_subfield(grid, sf)
        s += np.sum(_share_weights(grid, sf.sub) * sf.values ** 2)
    return float(grid.h * np.sqrt(s))


def subdomain_sum_l2(grid: Grid, fields) -> float:
    return float(sum(l2_norm(grid, sf) for sf in _four(fields)))


def glue(grid: Grid, fields) -> np.ndarray:
    """Global array from four subfields; shared nodes get the mean of their values."""
    out = np.zeros(grid.shape)
    for sf in _four(fields):
        _check_subfield(grid, sf)
        out[grid.sub_slice(sf.sub)] += _share_weights(grid, sf.sub) * sf.values
    return out
