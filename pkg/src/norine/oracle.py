"""Ground truth for small cubes by enumerating every antipodal coloring.

An antipodal coloring is fixed by one color per antipodal edge pair, so Q_n
has ``2 ** (n * 2**(n-2))`` of them: 4, 64 and 65536 for n = 2, 3, 4.  That
is as far as enumeration goes; n = 5 already has 2**40.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterator, Optional, TextIO

from norine.cnf import EncodeOptions, build_instance
from norine.cube import (
    Color,
    Coloring,
    Geodesic,
    antipodal_edge_id,
    check_dim,
    find_mono_geodesic,
    geodesics_from,
    num_edges,
)
from norine.solver import Model, SolveResult, solve

MAX_ENUM_DIM = 4


class EncodingMismatch(AssertionError):
    """The SAT route and the enumeration route disagree."""

    def __init__(self, message: str, witness: Optional[Coloring] = None):
        super().__init__(message if witness is None else f"{message}; witness {witness!r}")
        self.witness = witness


def _check_enum_dim(n: int) -> None:
    check_dim(n)
    if n > MAX_ENUM_DIM:
        raise ValueError(f"enumeration limited to n <= {MAX_ENUM_DIM} (n={n} has "
                         f"2^{n << (n - 2)} antipodal colorings)")


def antipodal_pairs(n: int) -> list[tuple[int, int]]:
    """Antipodal edge pairs ``(eid, partner)`` with ``eid < partner``, by eid."""
    pairs = []
    for eid in range(1, num_edges(n) + 1):
        partner = antipodal_edge_id(eid, n)
        if eid < partner:
            pairs.append((eid, partner))
    return pairs


def enumerate_antipodal_colorings(n: int) -> Iterator[Coloring]:
    """Every antipodal coloring once; bit i of the counter colors pair i's first edge."""
    _check_enum_dim(n)
    pairs = antipodal_pairs(n)
    partners = 0
    toggles = []
    for eid, partner in pairs:
        partners |= 1 << (partner - 1)
        toggles.append((1 << (eid - 1)) | (1 << (partner - 1)))
    for choice in range(1 << len(pairs)):
        bits = partners
        i = 0
        while choice:
            if choice & 1:
                bits ^= toggles[i]
            choice >>= 1
            i += 1
        yield Coloring(n, bits)


def geodesic_masks(n: int) -> list[int]:
    """Edge bit-masks of all full geodesics from canonical start vertices."""
    masks = []
    for u in range(1 << (n - 1)):
        for g in geodesics_from(u, n):
            m = 0
            for eid in g.edge_ids(n):
                m |= 1 << (eid - 1)
            masks.append(m)
    return masks


def brute_force_geodesic_conjecture(n: int) -> list[Coloring]:
    """Antipodal colorings of Q_n without a monochromatic antipodal geodesic.

    Checks every path explicitly as an edge mask, independent of the dynamic
    program in :mod:`norine.cube`.
    """
    _check_enum_dim(n)
    masks = geodesic_masks(n)
    found = []
    for c in enumerate_antipodal_colorings(n):
        bits = c.bits
        for m in masks:
            hit = bits & m
            if hit == m or hit == 0:
                break
        else:
            found.append(c)
    return found


def decode_model(m: Model, n: int) -> Coloring:
    """Edge ``e`` is red iff variable ``edge_id(e)`` is true."""
    check_dim(n)
    if m.num_vars != num_edges(n):
        raise ValueError(f"model has {m.num_vars} variables, Q_{n} has {num_edges(n)} edges")
    bits = 0
    for i, v in enumerate(m.values):
        if v:
            bits |= 1 << i
    return Coloring(n, bits)


def encode_coloring(c: Coloring) -> Model:
    return Model([bool(c.bits >> i & 1) for i in range(num_edges(c.n))])


@dataclass(frozen=True)
class CounterexampleCheck:
    """Outcome of :func:`check_counterexample`.

    ``kind`` is ``"valid"``, ``"non-antipodal"`` (``detail`` = edge id pair)
    or ``"mono-geodesic"`` (``detail`` = ``(Geodesic, Color)``).
    """

    kind: str
    detail: object = None

    @property
    def valid(self) -> bool:
        return self.kind == "valid"


def check_counterexample(c: Coloring) -> CounterexampleCheck:
    """Is ``c`` a counterexample to the geodesic conjecture?

    The first violated property is reported: antipodality first (lowest edge
    id), then monochromatic geodesics by start vertex, red before blue.
    """
    bad = c.non_antipodal_pair()
    if bad is not None:
        return CounterexampleCheck("non-antipodal", bad)
    for u in range(1 << (c.n - 1)):
        for color in (Color.RED, Color.BLUE):
            g = find_mono_geodesic(c, u, color)
            if g is not None:
                return CounterexampleCheck("mono-geodesic", (g, color))
    return CounterexampleCheck("valid")


@dataclass
class CrossCheckReport:
    n: int
    colorings: int
    counterexamples: int
    plain: SolveResult
    symmetric: SolveResult
    timings: dict[str, float] = field(default_factory=dict)

    def summary(self) -> str:
        return (f"n={self.n}: {self.colorings} antipodal colorings, "
                f"{self.counterexamples} counterexamples; SAT without symmetry units: "
                f"{self.plain.status.name}, with: {self.symmetric.status.name}")


def cross_check_encoding(n: int, seed: int = 0) -> CrossCheckReport:
    """Compare the SAT verdicts with enumeration; raise EncodingMismatch on disagreement."""
    _check_enum_dim(n)
    timings = {}
    t = time.perf_counter()
    counterexamples = brute_force_geodesic_conjecture(n)
    timings["enumerate"] = time.perf_counter() - t

    t = time.perf_counter()
    plain = solve(build_instance(n, EncodeOptions(include_symmetry=False)), seed=seed)
    timings["solve_plain"] = time.perf_counter() - t
    t = time.perf_counter()
    symmetric = solve(build_instance(n), seed=seed)
    timings["solve_symmetric"] = time.perf_counter() - t

    if plain.is_unsat != (not counterexamples):
        witness = counterexamples[0] if counterexamples else decode_model(plain.model, n)
        raise EncodingMismatch(f"n={n}: plain instance {plain.status.name} but "
                               f"{len(counterexamples)} counterexamples enumerated", witness)
    if plain.is_sat:
        found = decode_model(plain.model, n)
        if not check_counterexample(found).valid or found not in set(counterexamples):
            raise EncodingMismatch(f"n={n}: model is not an enumerated counterexample", found)
    if symmetric.is_unsat != plain.is_unsat:
        raise EncodingMismatch(f"n={n}: symmetry units changed the verdict "
                               f"({plain.status.name} -> {symmetric.status.name})",
                               counterexamples[0] if counterexamples else None)
    return CrossCheckReport(n, 1 << (n << (n - 2)), len(counterexamples), plain, symmetric, timings)


# -- coloring interchange files ------------------------------------------------

COLORING_HEADER = "norine-coloring"


def write_coloring(c: Coloring, sink: TextIO) -> None:
    sink.write(f"{COLORING_HEADER} n={c.n}\n")
    for eid in range(1, num_edges(c.n) + 1):
        sink.write(f"{eid} {'R' if c.color(eid) else 'B'}\n")


def read_coloring(stream) -> Coloring:
    lines = [ln.strip() for ln in stream if ln.strip()]
    if not lines:
        raise ValueError("empty coloring file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != COLORING_HEADER or not head[1].startswith("n="):
        raise ValueError(f"bad coloring header {lines[0]!r}")
    n = check_dim(int(head[1][2:]))
    colors: dict[int, bool] = {}
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2 or parts[1] not in ("R", "B"):
            raise ValueError(f"bad coloring line {ln!r}")
        eid = int(parts[0])
        if not 1 <= eid <= num_edges(n) or eid in colors:
            raise ValueError(f"bad or repeated edge id {eid}")
        colors[eid] = parts[1] == "R"
    if len(colors) != num_edges(n):
        raise ValueError(f"coloring lists {len(colors)} of {num_edges(n)} edges")
    return Coloring.from_colors(n, [colors[e] for e in range(1, num_edges(n) + 1)])


def describe_witness(check: CounterexampleCheck) -> str:
    if check.kind == "valid":
        return "valid counterexample"
    if check.kind == "non-antipodal":
        a, b = check.detail
        return f"not antipodal: edges {a} and {b} share a color"
    g, color = check.detail
    assert isinstance(g, Geodesic)
    path = "->".join(str(v) for v in g.vertices())
    return f"monochromatic {color.name.lower()} geodesic {path}"
