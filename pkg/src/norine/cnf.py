"""CNF encoding of counterexamples to the geodesic Norine conjecture.

Variable ``X_e`` is the edge id of ``e`` (see :mod:`norine.cube`); true means
red.  Three clause families, emitted in this order:

* antipodal: ``X_e`` and ``X_ebar`` differ (two binary clauses per pair);
* geodesic: every geodesic between antipodal vertices, taken in one of its
  two directions, has a red edge among its first ``n - 1`` edges (the last
  edge is implied, see below);
* symmetry: vertex 0 has red edges along coordinates ``0..k-1`` and a blue
  edge along coordinate ``k``, with ``k = ceil(n/2)``.

Dropping the last edge is safe: if the first ``n - 1`` edges ``u .. v`` of a
geodesic are blue, the antipodal edges ``vbar-u`` and ``v-ubar`` have opposite
colors, so one of ``vbar..v`` or ``u..ubar`` is a blue geodesic anyway.
Forbidding red-free geodesics also forbids all-red ones: the antipodal image
of an all-red geodesic is an all-blue geodesic.

Clauses are tuples of nonzero DIMACS literals.  The geodesic family is
produced lazily; at n=8 it has over five million clauses.
"""

from __future__ import annotations

import io
import itertools
import math
from dataclasses import dataclass, field
from operator import itemgetter
from typing import Callable, Iterable, Iterator, Optional, Sequence, TextIO

from norine import __version__
from norine.cube import antipodal_edge_id, check_dim, edge_id, edge_id_table, Edge, num_edges

Clause = tuple[int, ...]


class DimacsError(ValueError):
    pass


@dataclass(frozen=True)
class EncodeOptions:
    include_antipodal: bool = True
    include_geodesic: bool = True
    include_symmetry: bool = True

    def describe(self) -> str:
        on = [name for name, flag in (("antipodal", self.include_antipodal),
                                      ("geodesic", self.include_geodesic),
                                      ("symmetry", self.include_symmetry)) if flag]
        return ",".join(on) or "none"


@dataclass
class ClauseFamily:
    """A named block of clauses, either stored or regenerated on demand."""

    name: str
    count: int
    source: Callable[[], Iterable[Clause]]

    def __iter__(self) -> Iterator[Clause]:
        return iter(self.source())

    @classmethod
    def stored(cls, name: str, clauses: list[Clause]) -> "ClauseFamily":
        return cls(name, len(clauses), lambda: clauses)


@dataclass
class CnfInstance:
    num_vars: int
    families: list[ClauseFamily] = field(default_factory=list)
    comments: list[str] = field(default_factory=list)

    @classmethod
    def from_clauses(cls, num_vars: int, clauses: Iterable[Iterable[int]],
                     comments: Iterable[str] = ()) -> "CnfInstance":
        stored = [check_clause(c, num_vars) for c in clauses]
        return cls(num_vars, [ClauseFamily.stored("clauses", stored)], list(comments))

    @property
    def num_clauses(self) -> int:
        return sum(f.count for f in self.families)

    def family_counts(self) -> dict[str, int]:
        return {f.name: f.count for f in self.families}

    def __iter__(self) -> Iterator[Clause]:
        for fam in self.families:
            yield from fam

    def __len__(self) -> int:
        return self.num_clauses

    def materialize(self) -> list[Clause]:
        return list(self)

    def extended(self, name: str, extra: list[Clause]) -> "CnfInstance":
        """A copy with one more stored family appended."""
        return CnfInstance(self.num_vars, self.families + [ClauseFamily.stored(name, extra)],
                           list(self.comments))


def check_clause(lits: Iterable[int], num_vars: Optional[int] = None) -> Clause:
    clause = tuple(int(x) for x in lits)
    if not clause:
        raise ValueError("empty clause")
    seen = set()
    for lit in clause:
        if lit == 0:
            raise ValueError("literal 0 inside clause")
        if num_vars is not None and abs(lit) > num_vars:
            raise ValueError(f"literal {lit} exceeds declared variable count {num_vars}")
        if lit in seen:
            raise ValueError(f"duplicate literal {lit}")
        if -lit in seen:
            raise ValueError(f"complementary literals {lit} and {-lit}")
        seen.add(lit)
    return clause


# -- clause families ---------------------------------------------------------

def antipodal_clauses(n: int) -> list[Clause]:
    check_dim(n)
    out = []
    for eid in range(1, num_edges(n) + 1):
        partner = antipodal_edge_id(eid, n)
        if eid < partner:
            out.append((eid, partner))
            out.append((-eid, -partner))
    return out


def keeps_orientation(u: int, order: Sequence[int]) -> bool:
    """Whether the geodesic ``(u, order)`` is the one kept from its reverse pair.

    Rotating a geodesic around its closed antipodal walk (start at the second
    vertex, move the first flip to the end) keeps the cyclic order of
    ``order``; reversing the geodesic reverses it.  Keeping the orientation
    where 0 is followed by a smaller coordinate than it is preceded by picks
    one geodesic per reverse pair, and no two kept geodesics share their
    first ``n - 1`` edges.  For n = 2 the cyclic order is symmetric and the
    start vertex parity breaks the tie.
    """
    n = len(order)
    if n == 2:
        return order[0] == bin(u).count("1") & 1
    i = order.index(0)
    return order[(i + 1) % n] < order[i - 1]


def geodesic_clauses(n: int) -> Iterator[Clause]:
    """Positive clauses over the first ``n - 1`` edges of one geodesic per reverse pair.

    Exactly ``2**(n-1) * n!`` pairwise distinct clauses, ordered by start
    vertex and then by the lexicographic rank of the flip order.
    """
    check_dim(n)
    return _geodesic_stream(n)


def _geodesic_getters(n: int, parity: int) -> list[Callable]:
    # One getter per kept flip order, picking the first n-1 steps of the walk
    # from 0 out of a flat (vertex, dir) -> edge id row; translating the walk
    # to start u just means building the row for w ^ u.
    getters = []
    for order in itertools.permutations(range(n)):
        if not keeps_orientation(parity, order):
            continue
        w = 0
        idx = []
        for d in order[:-1]:
            idx.append(w * n + d)
            w ^= 1 << d
        if len(idx) == 1:
            i0 = idx[0]
            getters.append(lambda row, i0=i0: (row[i0],))
        else:
            getters.append(itemgetter(*idx))
    return getters


def _geodesic_stream(n: int) -> Iterator[Clause]:
    table = edge_id_table(n)
    by_parity = [_geodesic_getters(n, 0), _geodesic_getters(n, 1)]
    size = 1 << n
    for u in range(size):
        row = [0] * (size * n)
        for w in range(size):
            row[w * n:(w + 1) * n] = table[w ^ u]
        for get in by_parity[bin(u).count("1") & 1]:
            yield get(row)


def symmetry_breaking_units(n: int) -> list[Clause]:
    check_dim(n)
    k = math.ceil(n / 2)
    units = [(edge_id(Edge(0, d), n),) for d in range(k)]
    units.append((-edge_id(Edge(0, k), n),))
    return units


# -- assembly and statistics -------------------------------------------------

def instance_stats(n: int) -> dict[str, int]:
    """Closed-form sizes of the full encoding (no clause is generated)."""
    check_dim(n)
    half = 1 << (n - 1)
    stats = {
        "num_vars": n * half,
        "antipodal": n * half,
        "geodesic": half * math.factorial(n),
        "symmetry": math.ceil(n / 2) + 1,
    }
    stats["total"] = stats["antipodal"] + stats["geodesic"] + stats["symmetry"]
    return stats


def build_instance(n: int, opts: EncodeOptions = EncodeOptions()) -> CnfInstance:
    check_dim(n)
    stats = instance_stats(n)
    families = []
    if opts.include_antipodal:
        families.append(ClauseFamily.stored("antipodal", antipodal_clauses(n)))
    if opts.include_geodesic:
        families.append(ClauseFamily("geodesic", stats["geodesic"], lambda: _geodesic_stream(n)))
    if opts.include_symmetry:
        families.append(ClauseFamily.stored("symmetry", symmetry_breaking_units(n)))
    comments = [
        f"norine geodesic counterexample encoding n={n}",
        f"families={opts.describe()}",
        f"variable = edge id, true = red; norine {__version__}",
    ]
    return CnfInstance(stats["num_vars"], families, comments)


# -- DIMACS ------------------------------------------------------------------

def write_dimacs(inst: CnfInstance, sink: TextIO, comments: bool = True) -> int:
    """Stream ``inst`` to a text sink; returns the number of clause lines."""
    if comments:
        for line in inst.comments:
            sink.write(f"c {line}\n" if line else "c\n")
    sink.write(f"p cnf {inst.num_vars} {inst.num_clauses}\n")
    names = [str(i) for i in range(inst.num_vars + 1)]
    names_neg = ["-" + s for s in names]
    written = 0
    buf = []
    for clause in inst:
        buf.append(" ".join([names[x] if x > 0 else names_neg[-x] for x in clause]))
        if len(buf) >= 8192:
            sink.write(" 0\n".join(buf) + " 0\n")
            written += len(buf)
            buf.clear()
    if buf:
        sink.write(" 0\n".join(buf) + " 0\n")
        written += len(buf)
    if written != inst.num_clauses:
        raise RuntimeError(f"instance declared {inst.num_clauses} clauses but produced {written}")
    return written


def dimacs_string(inst: CnfInstance, comments: bool = True) -> str:
    buf = io.StringIO()
    write_dimacs(inst, buf, comments)
    return buf.getvalue()


def iter_dimacs(stream: Iterable[str]):
    """Parse DIMACS text lazily.

    Yields ``("header", (vars, clauses))`` once, ``("comment", text)`` for
    comment lines, then ``("clause", tuple)`` per clause.  Clauses may span
    lines; each ends at literal 0.
    """
    header = None
    pending: list[int] = []
    for lineno, raw in enumerate(stream, 1):
        line = raw.strip()
        if not line:
            continue
        if line[0] == "c":
            yield "comment", line[2:] if line.startswith("c ") else line[1:]
            continue
        if line[0] == "p":
            parts = line.split()
            if header is not None or len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"line {lineno}: bad problem line {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise DimacsError(f"line {lineno}: bad problem line {line!r}") from None
            if header[0] < 0 or header[1] < 0:
                raise DimacsError(f"line {lineno}: negative counts")
            yield "header", header
            continue
        if line[0] == "%":  # SATLIB end marker
            break
        if header is None:
            raise DimacsError(f"line {lineno}: clause before problem line")
        try:
            lits = [int(x) for x in line.split()]
        except ValueError:
            raise DimacsError(f"line {lineno}: non-integer token") from None
        for lit in lits:
            if lit == 0:
                if not pending:
                    raise DimacsError(f"line {lineno}: empty clause")
                if max(map(abs, pending)) > header[0]:
                    raise DimacsError(f"line {lineno}: literal exceeds {header[0]} variables")
                yield "clause", tuple(pending)
                pending = []
            else:
                pending.append(lit)
    if header is None:
        raise DimacsError("missing problem line")
    if pending:
        raise DimacsError("unterminated final clause")


def read_dimacs(stream: Iterable[str]) -> CnfInstance:
    header = None
    clauses = []
    comments = []
    for kind, value in iter_dimacs(stream):
        if kind == "clause":
            clauses.append(value)
        elif kind == "header":
            header = value
        else:
            comments.append(value)
    if len(clauses) != header[1]:
        raise DimacsError(f"header declares {header[1]} clauses, found {len(clauses)}")
    return CnfInstance(header[0], [ClauseFamily.stored("clauses", clauses)], comments)


def load_dimacs(path) -> CnfInstance:
    with open(path) as fh:
        return read_dimacs(fh)


def save_dimacs(inst: CnfInstance, path) -> int:
    with open(path, "w", newline="\n") as fh:
        return write_dimacs(inst, fh)
