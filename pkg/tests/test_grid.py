import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from crossnnm.grid import (
    InterfaceId,
    NodeKind,
    Reflection,
    SubdomainId,
    build_grid,
    reflect_array,
)


def test_smallest_grid():
    g = build_grid(2)
    assert g.num_nodes == 25
    assert g.h == 0.5
    assert g.classify_node((0, 0)).kind is NodeKind.CROSS_POINT


def test_meshsize_is_one_over_n():
    assert build_grid(100).h == 0.01


@pytest.mark.parametrize("n", [1, 0, -3])
def test_rejects_small_n(n):
    with pytest.raises(ValueError):
        build_grid(n)


def test_interface_nodes_n3():
    g = build_grid(3)
    nodes = g.interfaces[InterfaceId.G12].nodes
    assert [g.coords(p) for p in nodes] == [(0.0, -1.0), (0.0, -2 / 3), (0.0, -1 / 3), (0.0, 0.0)]


def test_interfaces_run_outer_to_crosspoint():
    g = build_grid(4)
    for itf in g.interfaces.values():
        assert g.classify_node(itf.nodes[0]).kind is NodeKind.BOUNDARY_CROSS_POINT
        assert itf.nodes[-1] == (0, 0)
        assert len(itf.nodes) == 5


def test_interface_normals_opposite():
    g = build_grid(4)
    for itf in g.interfaces.values():
        a, b = itf.subdomains
        na, nb = itf.normal(a), itf.normal(b)
        assert (na[0] + nb[0], na[1] + nb[1]) == (0, 0)
    # subdomain 1 sees G12 to its east
    assert g.interfaces[InterfaceId.G12].normal(SubdomainId.S1) == (1, 0)


@pytest.mark.parametrize(
    "p, kind, extra",
    [
        ((0, 0), NodeKind.CROSS_POINT, None),
        ((0, -2), NodeKind.INTERFACE, InterfaceId.G12),  # (0, -0.5) at n=4
        ((4, 0), NodeKind.BOUNDARY_CROSS_POINT, None),
        ((0, 4), NodeKind.BOUNDARY_CROSS_POINT, None),
        ((-4, -4), NodeKind.OUTER_BOUNDARY, None),
        ((2, 0), NodeKind.INTERFACE, InterfaceId.G23),
        ((0, 3), NodeKind.INTERFACE, InterfaceId.G34),
        ((-1, 0), NodeKind.INTERFACE, InterfaceId.G41),
        ((-2, -2), NodeKind.INTERIOR, SubdomainId.S1),
        ((2, -2), NodeKind.INTERIOR, SubdomainId.S2),
        ((2, 2), NodeKind.INTERIOR, SubdomainId.S3),
        ((-2, 2), NodeKind.INTERIOR, SubdomainId.S4),
    ],
)
def test_classify(p, kind, extra):
    c = build_grid(4).classify_node(p)
    assert c.kind is kind
    if kind is NodeKind.INTERFACE:
        assert c.interface is extra
    if kind is NodeKind.INTERIOR:
        assert c.subdomain is extra


def test_classify_rejects_outside():
    with pytest.raises(IndexError):
        build_grid(2).classify_node((3, 0))


def test_reflect_examples():
    g = build_grid(4)
    assert g.reflect((0, 0), Reflection.XY) == (0, 0)
    # (-0.5, -0.5) in subdomain 1 -> (0.5, -0.5) in subdomain 2
    assert g.reflect((-2, -2), Reflection.X) == (2, -2)
    assert g.classify_node((2, -2)).subdomain is SubdomainId.S2


_SWAP = {1: 3, 3: 1, 2: 4, 4: 2}


def test_point_reflection_preserves_classes():
    g = build_grid(5)
    for p in itertools.product(range(-5, 6), repeat=2):
        a, b = g.classify_node(p), g.classify_node(g.reflect(p, Reflection.XY))
        assert a.kind is b.kind
        if a.kind is NodeKind.INTERIOR:
            assert int(b.subdomain) == _SWAP[int(a.subdomain)]


def test_classification_partitions_interfaces():
    g = build_grid(6)
    seen = {}
    for itf in g.interfaces.values():
        for p in itf.nodes[1:-1]:
            assert p not in seen
            seen[p] = itf.id
            assert g.classify_node(p).interface is itf.id
    assert (0, 0) not in seen


@given(n=st.integers(2, 30), data=st.data())
def test_reflections_are_involutions(n, data):
    g = build_grid(n)
    p = (data.draw(st.integers(-n, n)), data.draw(st.integers(-n, n)))
    for kind in Reflection:
        q = g.reflect(p, kind)
        assert g.reflect(q, kind) == p
        x, y = g.coords(p)
        qx, qy = g.coords(q)
        # exact sign flips, no drift
        assert (abs(qx), abs(qy)) == (abs(x), abs(y))


def test_reflect_array_matches_pointwise():
    g = build_grid(3)
    v = np.arange(g.num_nodes, dtype=float).reshape(g.shape)
    for kind in Reflection:
        r = reflect_array(v, kind)
        for p in itertools.product(range(-3, 4), repeat=2):
            assert r[g.index(p)] == v[g.index(g.reflect(p, kind))]


def test_subdomain_blocks_cover_closed_squares():
    g = build_grid(3)
    X, Y = g.xy
    for s in SubdomainId:
        sl = g.sub_slice(s)
        xs, ys = X[sl], Y[sl]
        sx = 1 if s in (SubdomainId.S2, SubdomainId.S3) else -1
        sy = 1 if s in (SubdomainId.S3, SubdomainId.S4) else -1
        assert xs.shape == (4, 4)
        assert set(np.unique(np.sign(xs))) <= {0, sx}
        assert set(np.unique(np.sign(ys))) <= {0, sy}
