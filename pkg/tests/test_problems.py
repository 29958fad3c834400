import numpy as np
import pytest

from crossnnm import problems
from crossnnm.grid import build_grid
from crossnnm.symmetry import Parity, symmetry_defect


def node(grid, x, y):
    return grid.index((round(x * grid.n), round(y * grid.n)))


def test_example1_values():
    g = build_grid(10)
    f, gg = problems.build_example1(g)
    assert f[node(g, 0.3, -0.7)] == 1.0
    assert np.all(f == 1.0) and not gg.any()
    assert symmetry_defect(f, Parity.EVEN) == 0.0


def test_example2_values():
    g = build_grid(10)
    f, gg = problems.build_example2(g)
    # x + y = -1 and sin(2 phi) = 1 at (-1/2, -1/2); mirrored at (1/2, 1/2)
    assert f[node(g, -0.5, -0.5)] == pytest.approx(0.0, abs=1e-15)
    assert f[node(g, 0.5, 0.5)] == pytest.approx(0.0, abs=1e-15)
    # second quadrant: only x + y
    assert f[node(g, -0.5, 0.3)] == pytest.approx(-0.2, abs=1e-15)
    assert not gg.any()


@pytest.mark.parametrize("n", [2, 7, 20, 64])
def test_example2_is_exactly_odd(n):
    f, _ = problems.build_example2(build_grid(n))
    assert symmetry_defect(f, Parity.ODD) == 0.0


def test_angular_source_matches_arctan2():
    g = build_grid(16)
    X, Y = g.xy
    phi = np.arctan2(Y, X)
    ref = np.where((X < 0) & (Y < 0), np.sin(2 * phi), 0.0) - np.where((X > 0) & (Y > 0), np.sin(2 * phi), 0.0)
    np.testing.assert_allclose(problems.angular_source(g), ref, rtol=0, atol=1e-15)


def test_angular_source_vanishes_on_axes_and_other_quadrants():
    g = build_grid(8)
    X, Y = g.xy
    s = problems.angular_source(g)
    assert not s[(X == 0) | (Y == 0)].any()
    assert not s[(X * Y) < 0].any()


def test_sine_manufactured():
    g = build_grid(8)
    f, gg, u = problems.sine_manufactured(g)
    np.testing.assert_allclose(f, 2 * np.pi ** 2 * u)
    assert np.max(np.abs(u[g.outer_mask])) < 1e-15
    assert not gg.any()
