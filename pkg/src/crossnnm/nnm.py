"""Neumann-Neumann iterations on the four-subdomain square.

Three schemes share one driver:

``STANDARD``
    Dirichlet solves with relaxed traces ``u_i - theta (psi_i + psi_j)`` on
    every arm, then Neumann corrections driven by the summed fluxes.
``MIXED``
    Arms G23/G41 carry Dirichlet data and G12/G34 flux data for ``u``; the
    roles swap for ``psi``.  Meant for odd symmetric data.
``NEW``
    Standard iteration on the even part of the data, mixed iteration on the
    odd part, recombined after every step.

Errors are measured against the discrete monolithic solution, so what is
reported is iteration error only.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import fd, linsolve
from .fd import DEFAULT_CORNERS, CornerPolicy, SubField, Trace, TraceKind
from .grid import Grid, InterfaceId, SubdomainId
from .symmetry import decompose_even_odd

SUBDOMAINS = tuple(SubdomainId)

# transmission sets of the mixed scheme: first step (u) and second step (psi)
MIXED_U_DIRICHLET = frozenset({InterfaceId.G23, InterfaceId.G41})
MIXED_U_NEUMANN = frozenset({InterfaceId.G12, InterfaceId.G34})
MIXED_PSI_DIRICHLET = MIXED_U_NEUMANN
MIXED_PSI_NEUMANN = MIXED_U_DIRICHLET

DIVERGENCE_FACTOR = 1e3
CROSSPOINT_RADIUS = 2  # in meshsizes


class Method(enum.Enum):
    STANDARD = "standard"
    MIXED = "mixed"
    NEW = "new"


class Status(enum.Enum):
    RUNNING = "running"
    CONVERGED = "converged"
    MAX_ITERATIONS = "max_iterations"
    DIVERGED = "diverged"
    FAILED = "failed"


@dataclass(frozen=True, eq=False)
class IterState:
    k: int
    u: tuple[SubField, ...]
    psi: tuple[SubField, ...]
    theta: float

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("iteration counter must be >= 0")
        for name in ("u", "psi"):
            fields = tuple(getattr(self, name))
            if [int(sf.sub) for sf in fields] != [1, 2, 3, 4]:
                raise ValueError(f"{name} must hold subfields for subdomains 1..4 in order")
            object.__setattr__(self, name, fields)
        shapes = {sf.values.shape for sf in self.u + self.psi}
        if len(shapes) != 1:
            raise ValueError("all subfields must share one grid")


def _edge_values(grid: Grid, sf: SubField, iface: InterfaceId) -> np.ndarray:
    a, b = grid.edge_local_indices(sf.sub, iface)
    return sf.values[a, b]


def _neighbour(grid: Grid, sub: SubdomainId, iface: InterfaceId) -> SubdomainId:
    return grid.interfaces[iface].other(sub)


def init_state(grid: Grid, f, g, theta: float) -> IterState:
    """``u0`` = g on the outer boundary and 0 elsewhere, ``psi0`` = 0."""
    g = np.asarray(g, dtype=float)
    lift = np.where(grid.outer_mask, g, 0.0)
    u = tuple(fd.restrict(grid, lift, s) for s in SUBDOMAINS)
    psi = tuple(SubField(s, np.zeros((grid.n + 1, grid.n + 1))) for s in SUBDOMAINS)
    return IterState(0, u, psi, float(theta))


def _relaxed_dirichlet(grid, state, sub, iface) -> Trace:
    j = _neighbour(grid, sub, iface)
    u, psi = state.u, state.psi
    vals = _edge_values(grid, u[sub - 1], iface) - state.theta * (
        _edge_values(grid, psi[sub - 1], iface) + _edge_values(grid, psi[j - 1], iface)
    )
    return fd.dirichlet(iface, vals)


def _summed_flux(grid, u, f, sub, iface) -> Trace:
    j = _neighbour(grid, sub, iface)
    return fd.extract_flux(grid, sub, u[sub - 1], f, iface) + fd.extract_flux(grid, j, u[j - 1], f, iface)


def dirichlet_step_standard(grid: Grid, state: IterState, f, g, corners: CornerPolicy = DEFAULT_CORNERS):
    out = []
    for s in SUBDOMAINS:
        bc = {iid: _relaxed_dirichlet(grid, state, s, iid) for iid in grid.sub_interfaces(s)}
        out.append(fd.solve_subdomain(grid, s, f, g, bc, corners))
    return tuple(out)


def neumann_step_standard(grid: Grid, u, f, corners: CornerPolicy = DEFAULT_CORNERS):
    """Neumann corrections driven by ``dn_i u_i + dn_j u_j`` on every arm.

    At the cross-point every subdomain receives half of the corner flux
    residual summed over all four subdomains, split evenly between its two
    arms.  That sum vanishes for the monolithic solution, so the exact
    solution is a fixed point for any data; for even data it coincides with
    summing over the two edge neighbours only.
    """
    zero = fd.zero_source(grid)
    # each extracted trace ends with half of that subdomain's corner residual
    corner_total = sum(
        2.0 * fd.extract_flux(grid, s, u[s - 1], f, grid.sub_interfaces(s)[0]).values[-1] for s in SUBDOMAINS
    )
    out = []
    for s in SUBDOMAINS:
        bc = {}
        for iid in grid.sub_interfaces(s):
            vals = _summed_flux(grid, u, f, s, iid).values.copy()
            vals[-1] = 0.25 * corner_total
            bc[iid] = fd.flux(iid, vals)
        out.append(fd.solve_subdomain(grid, s, zero, zero, bc, corners))
    return tuple(out)


def first_step_mixed(grid: Grid, state: IterState, f, g, corners: CornerPolicy = DEFAULT_CORNERS):
    """Relaxed Dirichlet data on G23/G41, relaxed flux data on G12/G34.

    On a flux arm shared by ``i`` and ``j`` the new outward flux of ``u_i`` is

        dn_i u_i  -  theta * (dn_i psi_i - dn_j psi_j)

    i.e. both sides move the same single-valued normal flux by the relaxed
    correction flux, measured in a common direction.  ``dn_i u_i`` is taken as
    the antisymmetric mean ``(dn_i u_i - dn_j u_j) / 2`` of the two one-sided
    fluxes.  From the second iteration on this equals ``dn_i u_i`` itself;
    for the initial guess it is the flux a single global field would have.
    """
    zero = fd.zero_source(grid)
    out = []
    for s in SUBDOMAINS:
        bc = {}
        for iid in grid.sub_interfaces(s):
            if iid in MIXED_U_DIRICHLET:
                bc[iid] = _relaxed_dirichlet(grid, state, s, iid)
                continue
            j = _neighbour(grid, s, iid)
            du_i = fd.extract_flux(grid, s, state.u[s - 1], f, iid)
            du_j = fd.extract_flux(grid, j, state.u[j - 1], f, iid)
            dpsi_i = fd.extract_flux(grid, s, state.psi[s - 1], zero, iid)
            dpsi_j = fd.extract_flux(grid, j, state.psi[j - 1], zero, iid)
            bc[iid] = 0.5 * (du_i - du_j) - state.theta * (dpsi_i - dpsi_j)
        out.append(fd.solve_subdomain(grid, s, f, g, bc, corners))
    return tuple(out)


def second_step_mixed(grid: Grid, u, f, corners: CornerPolicy = DEFAULT_CORNERS):
    """Jumps ``u_i - u_j`` on G12/G34, summed fluxes on G23/G41."""
    zero = fd.zero_source(grid)
    out = []
    for s in SUBDOMAINS:
        bc = {}
        for iid in grid.sub_interfaces(s):
            if iid in MIXED_PSI_DIRICHLET:
                j = _neighbour(grid, s, iid)
                bc[iid] = fd.dirichlet(iid, _edge_values(grid, u[s - 1], iid) - _edge_values(grid, u[j - 1], iid))
            else:
                bc[iid] = _summed_flux(grid, u, f, s, iid)
        out.append(fd.solve_subdomain(grid, s, zero, zero, bc, corners))
    return tuple(out)


def step(grid: Grid, state: IterState, f, g, method: Method, corners: CornerPolicy = DEFAULT_CORNERS) -> IterState:
    method = Method(method)
    if method is Method.STANDARD:
        u = dirichlet_step_standard(grid, state, f, g, corners)
        psi = neumann_step_standard(grid, u, f, corners)
    elif method is Method.MIXED:
        u = first_step_mixed(grid, state, f, g, corners)
        psi = second_step_mixed(grid, u, f, corners)
    else:
        raise ValueError("the new method is a pair of runs; use iterate() or run()")
    return IterState(state.k + 1, u, psi, state.theta)


def iterate(grid: Grid, f, g, method: Method, theta: float, corners: CornerPolicy = DEFAULT_CORNERS) -> Iterator[IterState]:
    """Endless stream of states ``k = 0, 1, 2, ...``.

    For ``Method.NEW`` the yielded state is the sum of the even (standard) and
    odd (mixed) runs; use :func:`iterate_split` to see the two parts.
    """
    method = Method(method)
    if method is Method.NEW:
        for even, odd in iterate_split(grid, f, g, theta, corners):
            yield combine(even, odd)
        return
    state = init_state(grid, f, g, theta)
    while True:
        yield state
        state = step(grid, state, f, g, method, corners)


def iterate_split(
    grid: Grid, f, g, theta: float, corners: CornerPolicy = DEFAULT_CORNERS, symmetrize: bool = True
):
    """Pairs ``(even_state, odd_state)`` of the new method, in lockstep.

    With ``symmetrize`` each iterate is projected back onto its symmetry class
    after every step.  In exact arithmetic the projection is the identity; in
    floating point it keeps round-off out of the modes on which the other
    scheme is unstable (the standard iteration blows up odd components, and
    vice versa).
    """
    f_e, f_o = decompose_even_odd(f)
    g_e, g_o = decompose_even_odd(g)
    even = _symmetric_stream(grid, f_e, g_e, Method.STANDARD, theta, corners, +1 if symmetrize else 0)
    odd = _symmetric_stream(grid, f_o, g_o, Method.MIXED, theta, corners, -1 if symmetrize else 0)
    yield from zip(even, odd)


def _symmetric_stream(grid, f, g, method, theta, corners, sign):
    state = init_state(grid, f, g, theta)
    while True:
        yield state
        state = step(grid, state, f, g, method, corners)
        if sign:
            state = project(state, sign)


def _project_fields(fields, sign):
    # the point reflection maps subdomain 1 <-> 3 and 2 <-> 4; on local arrays it is a double flip
    out = list(fields)
    for a, b in ((0, 2), (1, 3)):
        va = 0.5 * (fields[a].values + sign * fields[b].values[::-1, ::-1])
        out[a] = SubField(fields[a].sub, va)
        out[b] = SubField(fields[b].sub, sign * va[::-1, ::-1])
    return tuple(out)


def project(state: IterState, sign: int) -> IterState:
    """Even (``sign=+1``) or odd (``sign=-1``) symmetric part of a piecewise state."""
    return IterState(state.k, _project_fields(state.u, sign), _project_fields(state.psi, sign), state.theta)


def combine(a: IterState, b: IterState) -> IterState:
    if a.k != b.k:
        raise ValueError(f"cannot combine iterates {a.k} and {b.k}")
    u = tuple(x + y for x, y in zip(a.u, b.u))
    psi = tuple(x + y for x, y in zip(a.psi, b.psi))
    return IterState(a.k, u, psi, a.theta)


def errors(grid: Grid, reference, u) -> tuple[SubField, ...]:
    """Local errors ``reference|Omega_i - u_i``."""
    return tuple(fd.restrict(grid, reference, sf.sub) - sf for sf in u)


def crosspoint_diagnostic(psi, grid: Grid) -> float:
    """Largest ``|psi|`` over nodes within two meshsizes of the cross-point."""
    best = 0.0
    lat = np.arange(grid.n + 1)
    for sf in psi:
        oi, oj = grid.sub_origin(sf.sub)
        I, J = np.meshgrid(lat + oi, lat + oj, indexing="ij")
        near = I * I + J * J <= CROSSPOINT_RADIUS ** 2
        best = max(best, float(np.max(np.abs(sf.values[near]))))
    return best


@dataclass(frozen=True)
class IterRecord:
    k: int
    l2_error: float
    broken_h1_error: float
    subdomain_sum_l2: float
    ratio: float
    psi_crosspoint_max: float


@dataclass
class RunHistory:
    theta: float
    records: list[IterRecord] = field(default_factory=list)
    status: Status = Status.RUNNING
    message: str = ""

    @property
    def converged_at(self) -> int | None:
        return self.records[-1].k if self.status is Status.CONVERGED else None

    @property
    def l2_errors(self) -> np.ndarray:
        return np.array([r.l2_error for r in self.records])

    @property
    def ratios(self) -> np.ndarray:
        return np.array([r.ratio for r in self.records])

    def asymptotic_ratio(self, floor: float = 1e-7) -> float:
        """Last contraction ratio whose error is still above ``floor * l2_error(1)``.

        Ratios taken once the error has sunk to round-off level say nothing
        about the iteration, hence the floor.
        """
        if len(self.records) < 3:
            return math.nan
        e1 = self.records[1].l2_error
        best = math.nan
        for r in self.records[2:]:
            if math.isnan(r.ratio):
                continue
            if math.isnan(best) or r.l2_error >= floor * e1:
                best = r.ratio
        return best

    @staticmethod
    def expected_ratio(theta: float) -> float:
        return abs(1.0 - 4.0 * theta)


@dataclass
class RunResult:
    history: RunHistory
    state: IterState
    reference: np.ndarray
    split: tuple[IterState, IterState] | None = None


def _record(grid, k, reference, state, prev_l2):
    e = errors(grid, reference, state.u)
    l2 = fd.glued_l2_norm(grid, e)
    ratio = l2 / prev_l2 if (k >= 2 and prev_l2 is not None and prev_l2 > 0) else math.nan
    return IterRecord(
        k=k,
        l2_error=l2,
        broken_h1_error=fd.broken_h1_norm(grid, e),
        subdomain_sum_l2=fd.subdomain_sum_l2(grid, e),
        ratio=ratio,
        psi_crosspoint_max=crosspoint_diagnostic(state.psi, grid),
    )


def run(
    grid: Grid,
    f,
    g,
    method: Method,
    theta: float,
    max_iter: int = 50,
    tol: float = 1e-10,
    corners: CornerPolicy = DEFAULT_CORNERS,
) -> RunResult:
    """Iterate until ``l2_error(k) <= tol * l2_error(0)``, divergence, or ``max_iter``.

    Divergence means ``l2_error(k) > 1e3 * l2_error(1)``.
    """
    method = Method(method)
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    if not tol > 0:
        raise ValueError("tol must be positive")
    theta = float(theta)
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    reference = fd.monolithic_solve(grid, f, g)

    if method is Method.NEW:
        states = ((combine(e, o), (e, o)) for e, o in iterate_split(grid, f, g, theta, corners))
    else:
        states = ((s, None) for s in iterate(grid, f, g, method, theta, corners))

    hist = RunHistory(theta)
    state = split = None
    prev = None
    try:
        for state, split in states:
            rec = _record(grid, state.k, reference, state, prev)
            if not all(map(math.isfinite, (rec.l2_error, rec.broken_h1_error, rec.psi_crosspoint_max))):
                hist.records.append(rec)
                hist.status, hist.message = Status.FAILED, "non-finite iterate"
                break
            hist.records.append(rec)
            prev = rec.l2_error
            e0 = hist.records[0].l2_error
            if rec.l2_error <= tol * e0:
                hist.status = Status.CONVERGED
                break
            if rec.k >= 2 and rec.l2_error > DIVERGENCE_FACTOR * hist.records[1].l2_error:
                hist.status = Status.DIVERGED
                break
            if rec.k >= max_iter:
                hist.status = Status.MAX_ITERATIONS
                break
    except (linsolve.SingularMatrixError, linsolve.ConvergenceError) as exc:
        hist.status, hist.message = Status.FAILED, str(exc)
    return RunResult(hist, state, reference, split)
