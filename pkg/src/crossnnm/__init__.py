"""Neumann-Neumann domain decomposition on a square with one interior cross-point."""
from .fd import (
    CornerPolicy,
    SubField,
    Trace,
    TraceKind,
    broken_h1_norm,
    extract_flux,
    l2_norm,
    monolithic_solve,
    solve_subdomain,
)
from .grid import Grid, InterfaceId, NodeKind, Reflection, SubdomainId, build_grid
from .io import read_field_csv, write_field_csv
from .nnm import Method, RunHistory, Status, crosspoint_diagnostic, init_state, iterate, iterate_split, run
from .problems import build_example1, build_example2
from .symmetry import Parity, decompose_even_odd, recompose, symmetry_defect

__version__ = "0.1.0"
