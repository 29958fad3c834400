"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``ACCEPTANCE <n> PASS|FAIL`` line; the lines are
repeated in the terminal summary (see conftest.py).
"""
import time

import numpy as np
import pytest

from crossnnm import cli, fd, nnm, problems
from crossnnm.grid import SubdomainId, build_grid
from crossnnm.nnm import Method
from crossnnm.symmetry import decompose_even_odd

RESULTS: dict[int, str] = {}

EXAMPLES = {1: problems.build_example1, 2: problems.build_example2}


def report(num: int, ok: bool, detail: str):
    line = f"ACCEPTANCE {num} {'PASS' if ok else 'FAIL'}: {detail}"
    RESULTS[num] = line
    print(line)
    assert ok, line


def test_1_direct_solver_at_quarter():
    grid = build_grid(40)
    worst, slowest = 0.0, 0.0
    for build in EXAMPLES.values():
        f, g = build(grid)
        t0 = time.perf_counter()
        res = nnm.run(grid, f, g, Method.NEW, 0.25, max_iter=2, tol=1e-300)
        slowest = max(slowest, time.perf_counter() - t0)
        rel = res.history.records[2].l2_error / fd.l2_norm(grid, res.reference)
        worst = max(worst, rel)
    report(1, worst <= 1e-9 and slowest < 5.0, f"max relative error at k=2 {worst:.2e} (<=1e-9), slowest run {slowest:.2f}s (<5s)")


def test_2_contraction_factor():
    grid = build_grid(40)
    worst = 0.0
    for theta in (0.1, 0.2, 0.23, 0.3, 0.4):
        q = abs(1 - 4 * theta)
        for build in EXAMPLES.values():
            f, g = build(grid)
            hist = nnm.run(grid, f, g, Method.NEW, theta, max_iter=8, tol=1e-300).history
            ratios = hist.ratios[3:9]
            assert len(ratios) == 6
            worst = max(worst, float(np.max(np.abs(ratios - q))) / q)
    report(2, worst <= 1e-6, f"max relative deviation of ratios k=3..8 from |1-4 theta|: {worst:.2e} (<=1e-6)")


def _odd_part(grid):
    f, g = problems.build_example2(grid)
    return decompose_even_odd(f)[1], g


def test_3_error_identities():
    grid = build_grid(40)
    cases = [
        (problems.build_example1, Method.STANDARD, (1, 1, 1)),
        (_odd_part, Method.MIXED, (-1, -1, 1)),
    ]
    psi_gap = refl_gap = contr_gap = 0.0
    for data, method, signs in cases:
        f, g = data(grid)
        ref = fd.monolithic_solve(grid, f, g)
        for theta in (0.1, 0.2, 0.3):
            it = nnm.iterate(grid, f, g, method, theta)
            states = [next(it) for _ in range(7)]
            errs = [nnm.errors(grid, ref, s.u) for s in states]
            # (a) psi^1 = -2 e^1
            psi_gap = max(psi_gap, max(float(np.max(np.abs(p.values + 2 * e.values))) for p, e in zip(states[1].psi, errs[1])))
            # (b) reflections relative to subdomain 1 (x on axis 0 of the local arrays)
            for e in errs[1:]:
                e1, e2, e3, e4 = (sf.values for sf in e)
                refl_gap = max(
                    refl_gap,
                    float(np.max(np.abs(e2 - signs[0] * e1[::-1, :]))),
                    float(np.max(np.abs(e3 - signs[1] * e1[::-1, ::-1]))),
                    float(np.max(np.abs(e4 - signs[2] * e1[:, ::-1]))),
                )
            # (c) e^k = (1 - 4 theta) e^{k-1}
            q = 1 - 4 * theta
            for k in range(2, 7):
                scale = max(float(np.max(np.abs(sf.values))) for sf in errs[k - 1])
                dev = max(float(np.max(np.abs(a.values - q * b.values))) for a, b in zip(errs[k], errs[k - 1]))
                contr_gap = max(contr_gap, dev / scale)
    ok = psi_gap <= 1e-9 and refl_gap <= 1e-9 and contr_gap <= 1e-8
    report(
        3,
        ok,
        f"(a) |psi1 + 2 e1| = {psi_gap:.1e} (<=1e-9), (b) reflection gap {refl_gap:.1e} (<=1e-9), "
        f"(c) contraction gap {contr_gap:.1e} relative (<=1e-8)",
    )


def test_4_standard_method_fails_on_odd_data():
    grid = build_grid(20)
    f, g = problems.build_example2(grid)
    hist = nnm.run(grid, f, g, Method.STANDARD, 0.25, max_iter=10, tol=1e-300).history
    e = hist.l2_errors
    non_contracting = len(e) > 10 and e[10] > e[2]
    peaks = []
    for n in (20, 40, 80):
        gr = build_grid(n)
        f, g = problems.build_example2(gr)
        h = nnm.run(gr, f, g, Method.STANDARD, 0.25, max_iter=2, tol=1e-300).history
        peaks.append(h.records[2].psi_crosspoint_max)
    increasing = peaks[0] < peaks[1] < peaks[2]
    report(
        4,
        non_contracting and increasing,
        f"l2(10)/l2(2) = {e[10] / e[2]:.3g} (>1), psi_crosspoint_max(k=2) over n=20,40,80: "
        + ", ".join(f"{p:.4f}" for p in peaks),
    )


def test_5_second_order_discretization():
    errs = []
    for n in (20, 40):
        grid = build_grid(n)
        f, g, exact = problems.sine_manufactured(grid)
        errs.append(fd.l2_norm(grid, fd.monolithic_solve(grid, f, g) - exact))
    r = errs[0] / errs[1]
    report(5, 3.2 <= r <= 4.8, f"error ratio n=20 -> n=40 is {r:.4f} (in [3.2, 4.8])")


def test_6_flux_duality():
    grid = build_grid(20)
    rng = np.random.default_rng(20240601)
    patterns = ("NN", "NN", "ND", "DN")
    worst = 0.0
    for trial in range(200):
        s = SubdomainId(trial % 4 + 1)
        f = rng.standard_normal(grid.shape)
        g = rng.standard_normal(grid.shape)
        traces = {}
        for iid in grid.sub_interfaces(s):
            a, b = grid.edge_local_indices(s, iid)
            v = rng.standard_normal(grid.n + 1)
            v[0] = g[grid.sub_slice(s)][a[0], b[0]]
            traces[iid] = fd.dirichlet(iid, v)
        u = fd.solve_subdomain(grid, s, f, g, traces)
        bc = {}
        for letter, iid in zip(patterns[(trial // 4) % 4], grid.sub_interfaces(s)):
            if letter == "N":
                bc[iid] = fd.extract_flux(grid, s, u, f, iid)
            else:
                # the field's own trace; the input traces disagree at the cross-point
                bc[iid] = fd.dirichlet(iid, u.values[grid.edge_local_indices(s, iid)])
        back = fd.solve_subdomain(grid, s, f, g, bc)
        worst = max(worst, float(np.max(np.abs(back.values - u.values)) / np.max(np.abs(u.values))))
    report(6, worst <= 1e-10, f"200 round trips at n=20, worst relative deviation {worst:.2e} (<=1e-10)")


@pytest.mark.parametrize("argv", [["--method", "new", "--example", "2", "--theta", "0.23", "--n", "30"]])
def test_7_determinism(tmp_path, argv):
    blobs = []
    for name in ("a", "b"):
        code = cli.main([*argv, "--out", str(tmp_path / name)])
        assert code == cli.EXIT_CONVERGED
        blobs.append((tmp_path / name / "history.csv").read_bytes())
    # a standard-method run goes through the other code path
    std = []
    for name in ("c", "d"):
        cli.main(["--method", "standard", "--example", "1", "--theta", "0.1", "--n", "20", "--out", str(tmp_path / name)])
        std.append((tmp_path / name / "history.csv").read_bytes())
    ok = blobs[0] == blobs[1] and std[0] == std[1]
    report(7, ok, f"repeated runs give byte-identical history.csv ({len(blobs[0])} and {len(std[0])} bytes)")
