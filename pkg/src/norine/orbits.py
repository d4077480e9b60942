"""Splitting the n=8 search by the colors around a fixed alternating square.

Any counterexample to the path conjecture has a square ``x y z t`` whose edges
alternate red, blue, red, blue.  Up to cube symmetry the square sits on
coordinates 1 and 2 with

    x = 00000000, y = 01000000, z = 11000000, t = 10000000

(labels 0, 2, 3, 1 with coordinate j stored in bit j-1), ``xy`` and ``zt``
red and ``yz`` and ``tx`` blue.  What remains free near the square are the
``4 * (n - 2)`` edges leaving x, y, z, t along coordinates 3..n, stored as a
*boundary word*: bit ``(n-2)*s + (c-3)`` colors edge ``(s, s + e_c)`` with
``s`` indexing x, y, z, t as 0, 1, 2, 3.

The symmetry group is generated by

* permutations of coordinates 3..n,
* the square translations T1 = (x t)(y z), T2 = (x y)(z t), T12 = (x z)(y t),
* a color swap: complement the boundary word and apply T12.

Square vertex index arithmetic: T2, T12, T1 are ``s ^ 1``, ``s ^ 2``,
``s ^ 3``.  An element is stored as ``(coord_perm, square_map, swap)`` and
moves boundary bit ``(s, c)`` to ``(P(s), coord_perm(c))`` where
``P(s) = s ^ square_map ^ (2 if swap else 0)``, complementing it when
``swap`` is set.  Composition is componentwise, so the group has order
``(n-2)! * 4 * 2``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, TextIO

import numpy as np

from norine.cnf import CnfInstance, EncodeOptions, build_instance
from norine.cube import Color, Edge, check_dim, edge_id

DEFAULT_DIM = 8

SQUARE_NAMES = ("x", "y", "z", "t")
SQUARE_LABELS = (0b00, 0b10, 0b11, 0b01)
SQUARE_MAPS = {"id": 0, "T2": 1, "T12": 2, "T1": 3}
SQUARE_MAP_NAMES = {v: k for k, v in SQUARE_MAPS.items()}
# (from, to, color) around the cycle
SQUARE_EDGES = ((0, 1, Color.RED), (2, 3, Color.RED), (1, 2, Color.BLUE), (3, 0, Color.BLUE))


def _check_frame_dim(n: int) -> int:
    check_dim(n)
    if n < 3:
        raise ValueError("the square frame needs n >= 3")
    return n


@dataclass(frozen=True)
class SquareFrame:
    """The fixed alternating square in Q_n and its boundary edges."""

    n: int = DEFAULT_DIM

    def __post_init__(self):
        _check_frame_dim(self.n)

    @property
    def free_coords(self) -> int:
        return self.n - 2

    @property
    def num_bits(self) -> int:
        return 4 * (self.n - 2)

    @property
    def num_states(self) -> int:
        return 1 << self.num_bits

    def bit_index(self, s: int, coord: int) -> int:
        """Boundary bit of edge ``(s, s + e_coord)``, ``coord`` in 3..n (1-based)."""
        if not 0 <= s < 4 or not 3 <= coord <= self.n:
            raise ValueError(f"no boundary edge ({s}, {coord})")
        return self.free_coords * s + coord - 3

    def boundary_edge(self, bit: int) -> Edge:
        s, off = divmod(bit, self.free_coords)
        return Edge(SQUARE_LABELS[s], off + 2)

    def square_units(self) -> list[tuple[int]]:
        units = []
        for a, b, color in SQUARE_EDGES:
            u, v = SQUARE_LABELS[a], SQUARE_LABELS[b]
            e = Edge(min(u, v), (u ^ v).bit_length() - 1)
            eid = edge_id(e, self.n)
            units.append((eid if color == Color.RED else -eid,))
        return units

    def boundary_units(self, word: int) -> list[tuple[int]]:
        units = []
        for bit in range(self.num_bits):
            eid = edge_id(self.boundary_edge(bit), self.n)
            units.append((eid if word >> bit & 1 else -eid,))
        return units


@dataclass(frozen=True)
class SymmetryElement:
    coord_perm: tuple[int, ...]
    square_map: str = "id"
    swap: bool = False

    def __post_init__(self):
        if sorted(self.coord_perm) != list(range(len(self.coord_perm))):
            raise ValueError(f"not a permutation: {self.coord_perm}")
        if self.square_map not in SQUARE_MAPS:
            raise ValueError(f"unknown square map {self.square_map!r}")

    @classmethod
    def identity(cls, n: int = DEFAULT_DIM) -> "SymmetryElement":
        return cls(tuple(range(n - 2)))

    @property
    def vertex_xor(self) -> int:
        return SQUARE_MAPS[self.square_map] ^ (2 if self.swap else 0)

    def vertex_map(self, s: int) -> int:
        return s ^ self.vertex_xor

    def compose(self, other: "SymmetryElement") -> "SymmetryElement":
        """``self`` after ``other``."""
        perm = tuple(self.coord_perm[i] for i in other.coord_perm)
        sq = SQUARE_MAPS[self.square_map] ^ SQUARE_MAPS[other.square_map]
        return SymmetryElement(perm, SQUARE_MAP_NAMES[sq], self.swap != other.swap)

    __matmul__ = compose

    def inverse(self) -> "SymmetryElement":
        inv = [0] * len(self.coord_perm)
        for i, j in enumerate(self.coord_perm):
            inv[j] = i
        return SymmetryElement(tuple(inv), self.square_map, self.swap)

    def signed_permutation(self) -> tuple[list[int], bool]:
        """``(dest, flip)``: boundary bit i moves to ``dest[i]``, complemented iff flip."""
        m = len(self.coord_perm)
        dest = []
        for s in range(4):
            for off in range(m):
                dest.append(m * self.vertex_map(s) + self.coord_perm[off])
        return dest, self.swap

    def preserves_square(self) -> bool:
        colors = {frozenset((a, b)): col for a, b, col in SQUARE_EDGES}
        for a, b, col in SQUARE_EDGES:
            image = frozenset((self.vertex_map(a), self.vertex_map(b)))
            if colors.get(image) != col:
                return False
        return True


def apply_symmetry(g: SymmetryElement, word: int) -> int:
    dest, flip = g.signed_permutation()
    out = 0
    for i, d in enumerate(dest):
        if word >> i & 1:
            out |= 1 << d
    if flip:
        out ^= (1 << len(dest)) - 1
    return out


def generators(n: int = DEFAULT_DIM) -> list[SymmetryElement]:
    """Adjacent coordinate transpositions, T1, T2 and the color swap."""
    _check_frame_dim(n)
    m = n - 2
    ident = tuple(range(m))
    gens = []
    for i in range(m - 1):
        p = list(ident)
        p[i], p[i + 1] = p[i + 1], p[i]
        gens.append(SymmetryElement(tuple(p)))
    gens.append(SymmetryElement(ident, "T1"))
    gens.append(SymmetryElement(ident, "T2"))
    gens.append(SymmetryElement(ident, "id", True))
    return gens


def group_elements(n: int = DEFAULT_DIM) -> list[SymmetryElement]:
    """Closure of :func:`generators` under composition, identity first."""
    gens = generators(n)
    ident = SymmetryElement.identity(n)
    bound = 4 * 8 * math.factorial(n - 2)
    seen = {ident}
    order = [ident]
    queue = deque([ident])
    products = 0
    while queue:
        h = queue.popleft()
        for g in gens:
            products += 1
            if products > bound * len(gens):
                raise RuntimeError("group closure did not terminate; generator bug")
            k = g @ h
            if k not in seen:
                seen.add(k)
                order.append(k)
                queue.append(k)
    return order


def fixed_points(g: SymmetryElement) -> int:
    """Number of boundary words fixed by ``g``.

    Each cycle of the bit permutation must be constant; with complementing a
    cycle of odd length has no consistent assignment.
    """
    dest, flip = g.signed_permutation()
    seen = [False] * len(dest)
    cycles = 0
    for start in range(len(dest)):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = dest[i]
            length += 1
        if flip and length % 2:
            return 0
        cycles += 1
    return 1 << cycles


def burnside_count(n: int = DEFAULT_DIM) -> int:
    elems = group_elements(n)
    total = sum(fixed_points(g) for g in elems)
    avg = Fraction(total, len(elems))
    if avg.denominator != 1:
        raise RuntimeError(f"Burnside average {avg} is not an integer; group construction bug")
    return int(avg)


@dataclass(frozen=True)
class OrbitSummary:
    index: int
    representative: int
    size: int

    def hex(self) -> str:
        return f"{self.representative:08x}"


def _vectorized_image(g: SymmetryElement, words: np.ndarray, num_bits: int) -> np.ndarray:
    dest, flip = g.signed_permutation()
    # per-byte lookup tables of the bit permutation
    out = np.zeros_like(words)
    for lo in range(0, num_bits, 8):
        width = min(8, num_bits - lo)
        table = np.zeros(1 << width, dtype=words.dtype)
        for v in range(1 << width):
            img = 0
            for k in range(width):
                if v >> k & 1:
                    img |= 1 << dest[lo + k]
            table[v] = img
        out |= table[(words >> lo) & ((1 << width) - 1)]
    if flip:
        out ^= (1 << num_bits) - 1
    return out


def orbit_labels(n: int = DEFAULT_DIM) -> np.ndarray:
    """``labels[w]`` = smallest boundary word in the orbit of ``w``.

    Min-label propagation along the (involutive) generators with pointer
    jumping; stops at the fixed point, where labels are constant on orbits.
    """
    frame = SquareFrame(n)
    bits = frame.num_bits
    words = np.arange(frame.num_states, dtype=np.uint32)
    images = [_vectorized_image(g, words, bits).astype(np.int64 if bits > 30 else np.int32)
              for g in generators(n)]
    del words
    labels = np.arange(frame.num_states, dtype=images[0].dtype)
    while True:
        before = labels.copy()
        for img in images:
            np.minimum(labels, labels[img], out=labels)
        labels = labels[labels]
        if np.array_equal(labels, before):
            return labels


def enumerate_orbits(n: int = DEFAULT_DIM) -> list[OrbitSummary]:
    labels = orbit_labels(n)
    reps, sizes = np.unique(labels, return_counts=True)
    return [OrbitSummary(i, int(r), int(s)) for i, (r, s) in enumerate(zip(reps, sizes))]


def flood_fill_orbits(n: int) -> list[OrbitSummary]:
    """Reference orbit enumeration by breadth-first search; small n only."""
    frame = SquareFrame(n)
    if frame.num_bits > 16:
        raise ValueError("pure-Python flood fill is limited to 16 boundary bits")
    gens = generators(n)
    visited = bytearray(frame.num_states)
    out = []
    for start in range(frame.num_states):
        if visited[start]:
            continue
        visited[start] = 1
        size = 0
        queue = deque([start])
        while queue:
            w = queue.popleft()
            size += 1
            for g in gens:
                v = apply_symmetry(g, w)
                if not visited[v]:
                    visited[v] = 1
                    queue.append(v)
        out.append(OrbitSummary(len(out), start, size))
    return out


def orbit_of(word: int, n: int = DEFAULT_DIM,
             elems: Optional[Sequence[SymmetryElement]] = None) -> set[int]:
    elems = group_elements(n) if elems is None else elems
    return {apply_symmetry(g, word) for g in elems}


def emit_subproblem(orbit: OrbitSummary, n: int = DEFAULT_DIM) -> CnfInstance:
    """Base encoding without vertex symmetry units plus the 4 + 4(n-2) fixed edges."""
    frame = SquareFrame(n)
    if not 0 <= orbit.representative < frame.num_states:
        raise ValueError(f"representative {orbit.representative:#x} out of range")
    base = build_instance(n, EncodeOptions(include_symmetry=False))
    units = frame.square_units() + frame.boundary_units(orbit.representative)
    inst = base.extended("assigned", units)
    inst.comments.append(f"orbit index={orbit.index} representative={orbit.hex()} size={orbit.size}")
    return inst


def subproblem_filename(index: int) -> str:
    return f"norine8_orbit{index}.cnf"


def write_orbit_table(orbits: Iterable[OrbitSummary], sink: TextIO) -> None:
    for o in orbits:
        sink.write(f"{o.index} {o.hex()} {o.size}\n")


def read_orbit_table(stream) -> list[OrbitSummary]:
    out = []
    for lineno, line in enumerate(stream, 1):
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 3 or len(parts[1]) != 8:
            raise ValueError(f"line {lineno}: expected '<index> <8 hex digits> <size>'")
        out.append(OrbitSummary(int(parts[0]), int(parts[1], 16), int(parts[2])))
    return out
