"""Symmetric Cartesian mesh on (-1, 1)^2 cut into four squares at the origin.

Nodes live on the integer lattice ``(i, j)`` with ``-n <= i, j <= n`` and
coordinates ``(i*h, j*h)``, ``h = 1/n``.  Nodal arrays are stored with shape
``(2n+1, 2n+1)`` and indexed ``[i + n, j + n]`` so that the x-axis is the first
array axis.  Reflections are index flips, hence exact.

Subdomains are numbered counter-clockwise from the bottom-left::

    +-----+-----+
    |  4  |  3  |
    +-----o-----+
    |  1  |  2  |
    +-----+-----+
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np


class SubdomainId(enum.IntEnum):
    S1 = 1
    S2 = 2
    S3 = 3
    S4 = 4


class InterfaceId(enum.Enum):
    G12 = "G12"
    G23 = "G23"
    G34 = "G34"
    G41 = "G41"


class Reflection(enum.Enum):
    X = "X"    # (x, y) -> (-x, y)
    Y = "Y"    # (x, y) -> (x, -y)
    XY = "XY"  # (x, y) -> (-x, -y)


class NodeKind(enum.Enum):
    INTERIOR = "interior"
    INTERFACE = "interface"
    CROSS_POINT = "cross_point"
    OUTER_BOUNDARY = "outer_boundary"
    BOUNDARY_CROSS_POINT = "boundary_cross_point"


@dataclass(frozen=True)
class NodeClass:
    kind: NodeKind
    subdomain: SubdomainId | None = None
    interface: InterfaceId | None = None


# lower-left lattice corner of each closed subdomain, in units of n
_SUB_ORIGIN = {
    SubdomainId.S1: (-1, -1),
    SubdomainId.S2: (0, -1),
    SubdomainId.S3: (0, 0),
    SubdomainId.S4: (-1, 0),
}

# (first, second) subdomain, and the outward normal of the first one
_IFACE_TOPOLOGY = {
    InterfaceId.G12: (SubdomainId.S1, SubdomainId.S2, (1, 0)),
    InterfaceId.G23: (SubdomainId.S2, SubdomainId.S3, (0, 1)),
    InterfaceId.G34: (SubdomainId.S3, SubdomainId.S4, (-1, 0)),
    InterfaceId.G41: (SubdomainId.S4, SubdomainId.S1, (0, -1)),
}

# direction from the cross-point towards the outer endpoint
_IFACE_ARM = {
    InterfaceId.G12: (0, -1),
    InterfaceId.G23: (1, 0),
    InterfaceId.G34: (0, 1),
    InterfaceId.G41: (-1, 0),
}


@dataclass(frozen=True)
class Interface:
    """One arm of the interface cross.

    ``nodes`` runs from the outer-boundary endpoint to the cross-point, both
    included, as integer lattice pairs.
    """

    id: InterfaceId
    subdomains: tuple[SubdomainId, SubdomainId]
    normals: dict = field(compare=False)
    nodes: tuple[tuple[int, int], ...]

    def other(self, sub: SubdomainId) -> SubdomainId:
        a, b = self.subdomains
        if sub == a:
            return b
        if sub == b:
            return a
        raise ValueError(f"{sub!r} is not adjacent to {self.id.value}")

    def normal(self, sub: SubdomainId) -> tuple[int, int]:
        return self.normals[sub]


@dataclass(frozen=True)
class Grid:
    n: int

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or isinstance(self.n, bool):
            raise TypeError(f"n must be an integer, got {type(self.n).__name__}")
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")

    @property
    def h(self) -> float:
        return 1.0 / self.n

    @property
    def shape(self) -> tuple[int, int]:
        return (2 * self.n + 1, 2 * self.n + 1)

    @property
    def num_nodes(self) -> int:
        return (2 * self.n + 1) ** 2

    @cached_property
    def lattice(self) -> np.ndarray:
        """Integer coordinates -n..n along one axis."""
        return np.arange(-self.n, self.n + 1)

    @cached_property
    def xy(self) -> tuple[np.ndarray, np.ndarray]:
        """Nodal coordinate arrays ``(X, Y)``, each of :attr:`shape`."""
        c = self.lattice * self.h
        X, Y = np.meshgrid(c, c, indexing="ij")
        X.flags.writeable = False
        Y.flags.writeable = False
        return X, Y

    def coords(self, p: tuple[int, int]) -> tuple[float, float]:
        self._check(p)
        return (p[0] * self.h, p[1] * self.h)

    def index(self, p: tuple[int, int]) -> tuple[int, int]:
        """Array index of lattice node ``p``."""
        self._check(p)
        return (p[0] + self.n, p[1] + self.n)

    def _check(self, p):
        i, j = p
        if not (-self.n <= i <= self.n and -self.n <= j <= self.n):
            raise IndexError(f"node {p} outside lattice [-{self.n}, {self.n}]^2")

    # -- topology ---------------------------------------------------------

    def sub_slice(self, sub: SubdomainId) -> tuple[slice, slice]:
        """Array slices of the closed subdomain inside a global array."""
        oi, oj = _SUB_ORIGIN[SubdomainId(sub)]
        n = self.n
        return (slice(n + oi * n, 2 * n + 1 + oi * n), slice(n + oj * n, 2 * n + 1 + oj * n))

    def sub_origin(self, sub: SubdomainId) -> tuple[int, int]:
        oi, oj = _SUB_ORIGIN[SubdomainId(sub)]
        return (oi * self.n, oj * self.n)

    def to_local(self, sub: SubdomainId, p: tuple[int, int]) -> tuple[int, int]:
        oi, oj = self.sub_origin(sub)
        a, b = p[0] - oi, p[1] - oj
        if not (0 <= a <= self.n and 0 <= b <= self.n):
            raise IndexError(f"node {p} is not in closed subdomain {int(sub)}")
        return (a, b)

    @cached_property
    def interfaces(self) -> dict[InterfaceId, Interface]:
        out = {}
        for iid, (a, b, nrm) in _IFACE_TOPOLOGY.items():
            di, dj = _IFACE_ARM[iid]
            nodes = tuple((di * m, dj * m) for m in range(self.n, -1, -1))
            normals = {a: nrm, b: (-nrm[0], -nrm[1])}
            out[iid] = Interface(iid, (a, b), normals, nodes)
        return out

    def sub_interfaces(self, sub: SubdomainId) -> tuple[InterfaceId, InterfaceId]:
        """The two interface arms bounding ``sub``, in ``InterfaceId`` order."""
        return tuple(i for i in InterfaceId if sub in _IFACE_TOPOLOGY[i][:2])

    def edge_local_indices(self, sub: SubdomainId, iface: InterfaceId) -> tuple[np.ndarray, np.ndarray]:
        """Local ``(a, b)`` index arrays of an interface edge of ``sub``,
        ordered outer endpoint -> cross-point."""
        itf = self.interfaces[iface]
        if sub not in itf.subdomains:
            raise ValueError(f"{iface.value} is not an edge of subdomain {int(sub)}")
        oi, oj = self.sub_origin(sub)
        nodes = np.array(itf.nodes)
        return nodes[:, 0] - oi, nodes[:, 1] - oj

    def classify_node(self, p: tuple[int, int]) -> NodeClass:
        self._check(p)
        i, j = p
        n = self.n
        if i == 0 and j == 0:
            return NodeClass(NodeKind.CROSS_POINT)
        on_outer = abs(i) == n or abs(j) == n
        if on_outer:
            if i == 0 or j == 0:
                return NodeClass(NodeKind.BOUNDARY_CROSS_POINT)
            return NodeClass(NodeKind.OUTER_BOUNDARY)
        if i == 0:
            return NodeClass(NodeKind.INTERFACE, interface=InterfaceId.G12 if j < 0 else InterfaceId.G34)
        if j == 0:
            return NodeClass(NodeKind.INTERFACE, interface=InterfaceId.G41 if i < 0 else InterfaceId.G23)
        if i < 0:
            sub = SubdomainId.S1 if j < 0 else SubdomainId.S4
        else:
            sub = SubdomainId.S2 if j < 0 else SubdomainId.S3
        return NodeClass(NodeKind.INTERIOR, subdomain=sub)

    def reflect(self, p: tuple[int, int], kind: Reflection) -> tuple[int, int]:
        self._check(p)
        i, j = p
        kind = Reflection(kind)
        if kind is Reflection.X:
            return (-i, j)
        if kind is Reflection.Y:
            return (i, -j)
        return (-i, -j)

    @cached_property
    def outer_mask(self) -> np.ndarray:
        m = np.zeros(self.shape, dtype=bool)
        m[0, :] = m[-1, :] = m[:, 0] = m[:, -1] = True
        m.flags.writeable = False
        return m


def build_grid(n: int) -> Grid:
    """Grid with ``(2n+1)^2`` nodes and meshsize ``1/n``."""
    return Grid(int(n) if isinstance(n, np.integer) else n)


def reflect_array(values: np.ndarray, kind: Reflection) -> np.ndarray:
    """Apply a reflection to a nodal array: ``out[p] = values[reflect(p)]``."""
    kind = Reflection(kind)
    if kind is Reflection.X:
        return values[::-1, :]
    if kind is Reflection.Y:
        return values[:, ::-1]
    return values[::-1, ::-1]
