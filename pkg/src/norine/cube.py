"""The hypercube Q_n and decision procedures on its red/blue edge colorings.

Vertices are plain integers in ``[0, 2**n)``.  Coordinate ``j`` of a bitstring
(1-based, as usually written) is bit ``j - 1`` of the label.  An edge is stored
by the endpoint whose direction bit is clear, which makes edge numbering and
the antipodal-edge map pure arithmetic.

Edge ids run from 1 to ``n * 2**(n-1)`` and double as CNF variable numbers::

    edge_id(base, d) = d * 2**(n-1) + squash(base, d) + 1

where ``squash`` deletes bit ``d`` from ``base``.
"""

from __future__ import annotations

import itertools
from enum import IntEnum
from typing import Iterator, NamedTuple, Optional, Sequence

MIN_DIM = 2
MAX_DIM = 16


class Color(IntEnum):
    BLUE = 0
    RED = 1


def check_dim(n: int) -> int:
    if not isinstance(n, int) or isinstance(n, bool):
        raise TypeError(f"dimension must be an int, got {type(n).__name__}")
    if not MIN_DIM <= n <= MAX_DIM:
        raise ValueError(f"dimension {n} outside [{MIN_DIM}, {MAX_DIM}]")
    return n


def num_vertices(n: int) -> int:
    return 1 << n


def num_edges(n: int) -> int:
    return n << (n - 1)


def _check_vertex(v: int, n: int) -> None:
    if not 0 <= v < (1 << n):
        raise ValueError(f"vertex {v} out of range for Q_{n}")


def antipode(v: int, n: int) -> int:
    check_dim(n)
    _check_vertex(v, n)
    return v ^ ((1 << n) - 1)


class Edge(NamedTuple):
    base: int
    dir: int

    def endpoints(self) -> tuple[int, int]:
        return self.base, self.base | (1 << self.dir)


def make_edge(u: int, v: int) -> Edge:
    """Canonical edge joining adjacent vertices ``u`` and ``v``."""
    diff = u ^ v
    if diff == 0 or diff & (diff - 1):
        raise ValueError(f"{u} and {v} are not adjacent")
    d = diff.bit_length() - 1
    return Edge(min(u, v), d)


def check_edge(e: Edge, n: int) -> None:
    check_dim(n)
    if not 0 <= e.dir < n:
        raise ValueError(f"edge direction {e.dir} out of range for Q_{n}")
    _check_vertex(e.base, n)
    if e.base >> e.dir & 1:
        raise ValueError(f"edge base {e.base} has direction bit {e.dir} set")


def squash(w: int, d: int) -> int:
    """Remove bit ``d`` from ``w``, shifting the higher bits down."""
    low = w & ((1 << d) - 1)
    return ((w >> (d + 1)) << d) | low


def unsquash(s: int, d: int) -> int:
    """Insert a zero bit at position ``d`` of ``s``."""
    low = s & ((1 << d) - 1)
    return ((s >> d) << (d + 1)) | low


def edge_id(e: Edge, n: int) -> int:
    check_edge(e, n)
    return (e.dir << (n - 1)) + squash(e.base, e.dir) + 1


def edge_from_id(eid: int, n: int) -> Edge:
    check_dim(n)
    if not 1 <= eid <= num_edges(n):
        raise ValueError(f"edge id {eid} out of range [1, {num_edges(n)}]")
    d, s = divmod(eid - 1, 1 << (n - 1))
    return Edge(unsquash(s, d), d)


def antipodal_edge(e: Edge, n: int) -> Edge:
    check_edge(e, n)
    mask = (1 << n) - 1
    # antipodes of base and base|2^d; the one with bit d clear is ~base ^ 2^d
    return Edge((e.base ^ mask) ^ (1 << e.dir), e.dir)


def antipodal_edge_id(eid: int, n: int) -> int:
    """Antipodal partner in id space: complement the squashed base."""
    half = 1 << (n - 1)
    d, s = divmod(eid - 1, half)
    return d * half + (s ^ (half - 1)) + 1


def edge_id_table(n: int) -> list[list[int]]:
    """``table[w][d]`` is the id of the edge leaving ``w`` along coordinate ``d``."""
    check_dim(n)
    half = 1 << (n - 1)
    table = []
    for w in range(1 << n):
        row = []
        for d in range(n):
            row.append(d * half + squash(w & ~(1 << d), d) + 1)
        table.append(row)
    return table


class Geodesic(NamedTuple):
    """A shortest path from ``start`` to its antipode.

    ``order`` lists the coordinates flipped along the way.
    """

    start: int
    order: tuple[int, ...]

    def vertices(self) -> list[int]:
        out = [self.start]
        w = self.start
        for d in self.order:
            w ^= 1 << d
            out.append(w)
        return out

    def edges(self) -> list[Edge]:
        out = []
        w = self.start
        for d in self.order:
            out.append(Edge(w & ~(1 << d), d))
            w ^= 1 << d
        return out

    def edge_ids(self, n: int) -> list[int]:
        return [edge_id(e, n) for e in self.edges()]


def geodesics_from(u: int, n: int) -> Iterator[Geodesic]:
    """All ``n!`` geodesics leaving ``u``, in lexicographic order of ``order``."""
    check_dim(n)
    _check_vertex(u, n)
    for order in itertools.permutations(range(n)):
        yield Geodesic(u, order)


class Coloring:
    """Total red/blue coloring of the edges of Q_n.

    Bit ``eid - 1`` of ``bits`` is the color of edge ``eid`` (1 = red).
    Instances are immutable.
    """

    __slots__ = ("_n", "_bits")

    def __init__(self, n: int, bits: int = 0):
        check_dim(n)
        if bits < 0 or bits >> num_edges(n):
            raise ValueError("color bits exceed the edge count")
        self._n = n
        self._bits = bits

    @property
    def n(self) -> int:
        return self._n

    @property
    def bits(self) -> int:
        return self._bits

    @classmethod
    def all_red(cls, n: int) -> "Coloring":
        return cls(n, (1 << num_edges(n)) - 1)

    @classmethod
    def all_blue(cls, n: int) -> "Coloring":
        return cls(n, 0)

    @classmethod
    def from_colors(cls, n: int, colors: Sequence[int]) -> "Coloring":
        """Build from a sequence indexed by ``edge_id - 1``."""
        if len(colors) != num_edges(n):
            raise ValueError(f"expected {num_edges(n)} colors, got {len(colors)}")
        bits = 0
        for i, c in enumerate(colors):
            if c:
                bits |= 1 << i
        return cls(n, bits)

    @classmethod
    def from_edges(cls, n: int, red_edges, default: Color = Color.BLUE) -> "Coloring":
        """Start from ``default`` and flip the listed ``(u, v)`` pairs to the other color."""
        bits = (1 << num_edges(n)) - 1 if default == Color.RED else 0
        for u, v in red_edges:
            bits ^= 1 << (edge_id(make_edge(u, v), n) - 1)
        return cls(n, bits)

    def color(self, eid: int) -> Color:
        return Color(self._bits >> (eid - 1) & 1)

    def edge_color(self, e: Edge) -> Color:
        return self.color(edge_id(e, self._n))

    def between(self, u: int, v: int) -> Color:
        return self.edge_color(make_edge(u, v))

    def with_color(self, eid: int, color: Color) -> "Coloring":
        mask = 1 << (eid - 1)
        bits = self._bits | mask if color else self._bits & ~mask
        return Coloring(self._n, bits)

    def colors(self) -> list[Color]:
        return [self.color(i) for i in range(1, num_edges(self._n) + 1)]

    def non_antipodal_pair(self) -> Optional[tuple[int, int]]:
        """First ``(eid, partner)`` pair with equal colors, or None."""
        n = self._n
        for eid in range(1, num_edges(n) + 1):
            partner = antipodal_edge_id(eid, n)
            if eid < partner and self.color(eid) == self.color(partner):
                return eid, partner
        return None

    def is_antipodal(self) -> bool:
        return self.non_antipodal_pair() is None

    def __eq__(self, other):
        if not isinstance(other, Coloring):
            return NotImplemented
        return self._n == other._n and self._bits == other._bits

    def __hash__(self):
        return hash((self._n, self._bits))

    def __repr__(self):
        return f"Coloring(n={self._n}, bits={self._bits:#x})"


def _mono_reachable(c: Coloring, u: int, color: Color) -> list[bool]:
    # reach[S]: u XOR S is reachable from u by a monotone path of the given color
    n = c.n
    bits = c.bits if color == Color.RED else ~c.bits
    reach = [False] * (1 << n)
    reach[0] = True
    for S in range(1, 1 << n):
        w = u ^ S
        rest = S
        while rest:
            low = rest & -rest
            d = low.bit_length() - 1
            if reach[S ^ low]:
                eid = (d << (n - 1)) + squash(w & ~low, d) + 1
                if bits >> (eid - 1) & 1:
                    reach[S] = True
                    break
            rest ^= low
    return reach


def has_mono_geodesic(c: Coloring, u: int, color: Color) -> bool:
    """True iff some geodesic from ``u`` to its antipode is entirely ``color``."""
    _check_vertex(u, c.n)
    return _mono_reachable(c, u, color)[-1]


def find_mono_geodesic(c: Coloring, u: int, color: Color) -> Optional[Geodesic]:
    """A witness for :func:`has_mono_geodesic`, traced back through the DP table."""
    n = c.n
    _check_vertex(u, n)
    reach = _mono_reachable(c, u, color)
    full = (1 << n) - 1
    if not reach[full]:
        return None
    order = []
    S = full
    while S:
        # walk backwards: pick the lowest d whose predecessor subset is reachable
        for d in range(n):
            low = 1 << d
            if S & low and reach[S ^ low]:
                w = u ^ S
                if c.edge_color(Edge(w & ~low, d)) == color:
                    order.append(d)
                    S ^= low
                    break
    return Geodesic(u, tuple(reversed(order)))


class DisjointSet:
    """Union-find with path halving and union by size."""

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.size = [1] * size

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


def has_mono_antipodal_path(c: Coloring) -> Optional[tuple[int, Color]]:
    """Find ``(u, color)`` with ``u`` and its antipode joined by a path of one color.

    Red components are checked before blue; within a color the smallest ``u``
    wins.  Returns None if no such pair exists.
    """
    n = c.n
    mask = (1 << n) - 1
    for color in (Color.RED, Color.BLUE):
        dsu = DisjointSet(1 << n)
        for eid in range(1, num_edges(n) + 1):
            if c.color(eid) == color:
                a, b = edge_from_id(eid, n).endpoints()
                dsu.union(a, b)
        for u in range(1 << (n - 1)):
            if dsu.find(u) == dsu.find(u ^ mask):
                return u, color
    return None


def squares(n: int) -> Iterator[tuple[int, int, int]]:
    """All 4-cycles as ``(w, a, b)``: base ``w`` with bits ``a < b`` clear."""
    check_dim(n)
    for w in range(1 << n):
        for a in range(n):
            if w >> a & 1:
                continue
            for b in range(a + 1, n):
                if not w >> b & 1:
                    yield w, a, b


def find_alternating_square(c: Coloring) -> Optional[tuple[int, int, int, int]]:
    """First square ``(x, y, z, t)`` whose edges alternate red/blue going around.

    A coloring with no such square is *simple*.
    """
    n = c.n
    for w, a, b in squares(n):
        cycle = (w, w | 1 << a, w | 1 << a | 1 << b, w | 1 << b)
        cols = [c.between(cycle[i], cycle[(i + 1) % 4]) for i in range(4)]
        if cols[0] != cols[1] and cols[0] == cols[2] and cols[1] == cols[3]:
            return cycle
    return None
