import io
import math

import pytest

from norine.cnf import (
    CnfInstance,
    DimacsError,
    EncodeOptions,
    antipodal_clauses,
    build_instance,
    check_clause,
    dimacs_string,
    geodesic_clauses,
    instance_stats,
    iter_dimacs,
    keeps_orientation,
    read_dimacs,
    symmetry_breaking_units,
    write_dimacs,
)
from norine.cube import Coloring, Edge, edge_id, geodesics_from, num_edges
from norine.oracle import enumerate_antipodal_colorings


def satisfies(bits, clause):
    return any((bits >> (x - 1) & 1) if x > 0 else not (bits >> (-x - 1) & 1) for x in clause)


def test_antipodal_examples():
    cl = antipodal_clauses(2)
    assert len(cl) == 4
    assert {abs(x) for c in cl for x in c} == {1, 2, 3, 4}
    # n=6 total minus geodesic (32 * 720) and symmetry (4) clauses
    assert len(antipodal_clauses(6)) == 23236 - 23040 - 4
    for n in range(2, 8):
        cl = antipodal_clauses(n)
        assert len(cl) == n << (n - 1)
        assert all(len(c) == 2 for c in cl)


def test_antipodal_clauses_pin_antipodality():
    for n in (2, 3):
        cl = antipodal_clauses(n)
        for bits in range(1 << num_edges(n)):
            ok = all(satisfies(bits, c) for c in cl)
            assert ok == Coloring(n, bits).is_antipodal()


@pytest.mark.parametrize("n, expected", [(6, 23040), (7, 322560)])
def test_geodesic_counts(n, expected):
    assert sum(1 for _ in geodesic_clauses(n)) == expected


@pytest.mark.parametrize("n", range(2, 7))
def test_geodesic_clause_shape(n):
    clauses = list(geodesic_clauses(n))
    assert len(clauses) == (1 << (n - 1)) * math.factorial(n)
    assert all(len(c) == n - 1 and all(x > 0 for x in c) for c in clauses)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_geodesic_clauses_distinct(n):
    clauses = list(geodesic_clauses(n))
    assert len({frozenset(c) for c in clauses}) == (1 << (n - 1)) * math.factorial(n)


def test_geodesic_clauses_distinct_n2():
    assert sorted(geodesic_clauses(2)) == [(1,), (2,), (3,), (4,)]


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_one_clause_per_undirected_geodesic(n):
    full = (1 << n) - 1
    kept = set()
    for u in range(1 << n):
        for g in geodesics_from(u, n):
            if keeps_orientation(u, g.order):
                key = (min(u, u ^ full), frozenset(g.edge_ids(n)))
                assert key not in kept
                kept.add(key)
    assert len(kept) == (1 << (n - 1)) * math.factorial(n)


def test_geodesic_clause_order_matches_geodesics():
    n = 4
    expected = []
    for u in range(1 << n):
        for g in geodesics_from(u, n):
            if keeps_orientation(u, g.order):
                expected.append(tuple(g.edge_ids(n)[:-1]))
    assert list(geodesic_clauses(n)) == expected


@pytest.mark.parametrize("n, k", [(6, 3), (7, 4), (8, 4)])
def test_symmetry_units(n, k):
    units = symmetry_breaking_units(n)
    assert len(units) == k + 1
    assert [u[0] for u in units[:k]] == [edge_id(Edge(0, d), n) for d in range(k)]
    assert units[k] == (-edge_id(Edge(0, k), n),)


@pytest.mark.parametrize("n, nv, total", [(6, 192, 23236), (7, 448, 323013)])
def test_build_instance_paper_sizes(n, nv, total):
    inst = build_instance(n)
    assert (inst.num_vars, inst.num_clauses) == (nv, total)
    assert sum(1 for _ in inst) == total


def test_instance_stats_n5():
    s = instance_stats(5)
    assert s["num_vars"] == 80
    assert s["total"] == 80 + 16 * 120 + 4 == 2004


@pytest.mark.parametrize("n", range(2, 9))
def test_closed_form_matches_construction(n):
    s = instance_stats(n)
    inst = build_instance(n)
    assert inst.num_vars == s["num_vars"]
    assert inst.family_counts() == {k: s[k] for k in ("antipodal", "geodesic", "symmetry")}
    if n <= 6:
        assert len(inst.materialize()) == s["total"]


def test_build_options_order():
    inst = build_instance(3, EncodeOptions(include_geodesic=False))
    assert [f.name for f in inst.families] == ["antipodal", "symmetry"]
    assert inst.num_clauses == 12 + 3
    assert build_instance(3, EncodeOptions(False, False, False)).num_clauses == 0
    with pytest.raises(ValueError):
        build_instance(1)


def test_build_deterministic():
    assert dimacs_string(build_instance(5)) == dimacs_string(build_instance(5))


def test_write_dimacs_basic():
    assert dimacs_string(CnfInstance(0), comments=False) == "p cnf 0 0\n"
    inst = CnfInstance.from_clauses(2, [(1, -2)])
    assert dimacs_string(inst, comments=False) == "p cnf 2 1\n1 -2 0\n"


def test_write_dimacs_n6_lines():
    text = dimacs_string(build_instance(6))
    lines = text.splitlines()
    body = [ln for ln in lines if not ln.startswith(("c", "p"))]
    assert len(body) == 23236
    assert "p cnf 192 23236" in lines
    assert all(ln.endswith(" 0") and "  " not in ln for ln in body)
    assert not any(ln != ln.rstrip() for ln in lines)


def test_dimacs_round_trip():
    inst = build_instance(4)
    back = read_dimacs(io.StringIO(dimacs_string(inst)))
    assert back.num_vars == inst.num_vars
    assert back.materialize() == inst.materialize()
    assert back.comments == inst.comments


def test_dimacs_multiline_clause():
    inst = read_dimacs(["p cnf 3 2", "1 -2", "3 0 -1 0"])
    assert inst.materialize() == [(1, -2, 3), (-1,)]


@pytest.mark.parametrize("text", [
    "1 2 0\n",
    "p cnf 2 1\n1 3 0\n",
    "p cnf 2 1\n1 2\n",
    "p cnf x 1\n",
    "p cnf 2 2\n1 0\n",
    "p cnf 2 1\n1 a 0\n",
    "c only\n",
])
def test_dimacs_malformed(text):
    with pytest.raises(DimacsError):
        read_dimacs(io.StringIO(text))


def test_iter_dimacs_streams():
    kinds = [k for k, _ in iter_dimacs(["c hi", "p cnf 1 1", "1 0"])]
    assert kinds == ["comment", "header", "clause"]


def test_check_clause():
    assert check_clause([1, -2]) == (1, -2)
    for bad in ([], [1, 1], [1, -1], [0]):
        with pytest.raises(ValueError):
            check_clause(bad)
    with pytest.raises(ValueError):
        check_clause([5], num_vars=4)


def _clause_values(n, clauses):
    return [all(satisfies(c.bits, cl) for cl in clauses) for c in enumerate_antipodal_colorings(n)]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_dropped_edge_equivalence(n):
    """First-(n-1)-edge clauses agree with full geodesic clauses in both directions."""
    short = list(geodesic_clauses(n))
    full = []
    for u in range(1 << n):
        for g in geodesics_from(u, n):
            full.append(tuple(g.edge_ids(n)))
    assert _clause_values(n, short) == _clause_values(n, full)


def test_stream_to_file(tmp_path):
    path = tmp_path / "n5.cnf"
    with open(path, "w") as fh:
        assert write_dimacs(build_instance(5), fh) == 2004
    with open(path) as fh:
        assert read_dimacs(fh).num_clauses == 2004

