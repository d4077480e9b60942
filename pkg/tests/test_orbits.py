import io
import random

import numpy as np
import pytest

from norine.cnf import iter_dimacs, read_dimacs, write_dimacs
from norine.cube import Edge, edge_id
from norine.orbits import (
    SQUARE_EDGES,
    OrbitSummary,
    SquareFrame,
    SymmetryElement,
    apply_symmetry,
    burnside_count,
    emit_subproblem,
    enumerate_orbits,
    fixed_points,
    flood_fill_orbits,
    generators,
    group_elements,
    orbit_of,
    read_orbit_table,
    subproblem_filename,
    write_orbit_table,
)


@pytest.fixture(scope="module")
def group8():
    return group_elements(8)


def bit(s, coord):
    return 1 << SquareFrame(8).bit_index(s, coord)


def test_identity_action():
    ident = SymmetryElement.identity()
    for w in (0, 1, 0xABCDEF, (1 << 24) - 1):
        assert apply_symmetry(ident, w) == w


def test_coordinate_swap_moves_bit():
    # coordinates 3 and 4 are offsets 0 and 1
    g = SymmetryElement((1, 0, 2, 3, 4, 5))
    assert apply_symmetry(g, bit(0, 3)) == bit(0, 4)


def test_swap_is_involution():
    g = SymmetryElement.identity() @ SymmetryElement(tuple(range(6)), "id", True)
    for w in (0, 5, 0x123456):
        assert apply_symmetry(g, apply_symmetry(g, w)) == w
    assert apply_symmetry(g, 0) != 0


def test_frame_indexing():
    f = SquareFrame(8)
    assert (f.num_bits, f.num_states) == (24, 1 << 24)
    edges = {f.boundary_edge(b) for b in range(24)}
    assert len(edges) == 24
    square = {edge_id(Edge(min(a, b), (a ^ b).bit_length() - 1), 8)
              for a, b in [(0, 0b10), (0b10, 0b11), (0b11, 0b01), (0b01, 0)]}
    assert {abs(u[0]) for u in f.square_units()} == square
    assert not square & {edge_id(e, 8) for e in edges}


def test_action_laws(group8):
    rng = random.Random(7)
    ident = SymmetryElement.identity()
    for _ in range(10000):
        g, h = rng.choice(group8), rng.choice(group8)
        w = rng.getrandbits(24)
        assert apply_symmetry(ident, w) == w
        assert apply_symmetry(g, apply_symmetry(h, w)) == apply_symmetry(g @ h, w)


def test_group_order_and_laws(group8):
    assert len(group8) == 5760
    assert 5760 % len(group8) == 0
    assert group8[0] == SymmetryElement.identity()
    elems = set(group8)
    for g in group8:
        assert g.inverse() in elems
        assert g @ g.inverse() == SymmetryElement.identity()


def test_every_element_preserves_square(group8):
    assert all(g.preserves_square() for g in group8)
    # the color swap must come with (x z)(y t); alone it would turn red edges blue
    assert SQUARE_EDGES[0][2] != SQUARE_EDGES[2][2]


def test_generators_are_involutions():
    for g in generators(8):
        assert g @ g == SymmetryElement.identity()


def test_identity_fixed_points():
    assert fixed_points(SymmetryElement.identity()) == 1 << 24
    # swap pairs x with z and y with t: twelve 2-cycles, each fixed word alternates
    assert fixed_points(SymmetryElement(tuple(range(6)), "id", True)) == 1 << 12
    # T1 pairs x,t and y,z with no complement
    assert fixed_points(SymmetryElement(tuple(range(6)), "T1")) == 1 << 12


@pytest.mark.parametrize("n", [3, 4, 5])
def test_fixed_points_match_brute_force(n):
    frame = SquareFrame(n)
    for g in group_elements(n):
        fixed = sum(1 for w in range(frame.num_states) if apply_symmetry(g, w) == w)
        assert fixed_points(g) == fixed


@pytest.mark.parametrize("n, count", [(3, 5), (4, 30), (5, 135), (6, 576)])
def test_small_analogue_three_ways(n, count):
    flood = flood_fill_orbits(n)
    assert flood == enumerate_orbits(n)
    assert len(flood) == burnside_count(n) == count
    assert sum(o.size for o in flood) == SquareFrame(n).num_states


def test_orbit_count_and_burnside(orbits8):
    assert len(orbits8) == 7218
    assert burnside_count(8) == 7218
    assert sum(o.size for o in orbits8) == 1 << 24


def test_orbit_sizes_divide_group_order(orbits8):
    assert all(5760 % o.size == 0 for o in orbits8)
    assert [o.index for o in orbits8] == list(range(len(orbits8)))
    reps = [o.representative for o in orbits8]
    assert reps == sorted(reps) and reps[0] == 0


def test_representatives_are_minimal(orbits8, group8):
    rng = random.Random(11)
    for o in rng.sample(orbits8, 40) + orbits8[:5] + orbits8[-5:]:
        orbit = orbit_of(o.representative, 8, group8)
        assert min(orbit) == o.representative
        assert len(orbit) == o.size


def test_representatives_pairwise_distinct_orbits(orbits8, group8):
    reps = np.array([o.representative for o in orbits8], dtype=np.int64)
    bits = (reps[:, None] >> np.arange(24)) & 1
    for g in group8:
        dest, flip = g.signed_permutation()
        images = (bits << np.array(dest)).sum(axis=1)
        if flip:
            images ^= (1 << 24) - 1
        assert (images >= reps).all()
        moved = images != reps
        assert not np.isin(images[moved], reps).any()


def test_emit_subproblem_shape(orbits8):
    o = orbits8[1234]
    inst = emit_subproblem(o, 8)
    assert inst.num_vars == 1024
    assert inst.num_clauses == 1024 + 5160960 + 28
    units = list(inst.families[-1].source())
    assert len(units) == 28
    assert len({abs(u[0]) for u in units}) == 28
    assert any("index=1234" in c for c in inst.comments)


def test_emit_subproblem_small_parse_back():
    orbits = enumerate_orbits(4)
    inst = emit_subproblem(orbits[7], 4)
    buf = io.StringIO()
    write_dimacs(inst, buf)
    back = read_dimacs(io.StringIO(buf.getvalue()))
    assert back.materialize() == inst.materialize()
    kinds = [k for k, _ in iter_dimacs(io.StringIO(buf.getvalue()))]
    assert kinds.count("clause") == inst.num_clauses


def test_subproblem_filename():
    assert subproblem_filename(42) == "norine8_orbit42.cnf"


def test_orbit_table_round_trip():
    orbits = enumerate_orbits(5)
    buf = io.StringIO()
    write_orbit_table(orbits, buf)
    first = buf.getvalue().splitlines()[1]
    assert first.split()[0] == "1" and len(first.split()[1]) == 8
    assert read_orbit_table(io.StringIO(buf.getvalue())) == orbits
    with pytest.raises(ValueError):
        read_orbit_table(["0 12 3"])


def test_orbit_summary_hex():
    assert OrbitSummary(0, 0xABC, 1).hex() == "00000abc"
