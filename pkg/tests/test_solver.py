import itertools

import pytest
from hypothesis import given, settings, strategies as st

from norine.cnf import CnfInstance, build_instance
from norine.solver import (
    Model,
    OutputFormatError,
    Solver,
    Status,
    format_result,
    luby,
    parse_external_result,
    solve,
    truth_table_solve,
    verify_model,
)

from conftest import random_cnf


def cnf(nv, clauses):
    return CnfInstance.from_clauses(nv, clauses)


def agree(inst, **kw):
    expected = truth_table_solve(inst)
    result = solve(inst, **kw)
    assert result.status in (Status.SAT, Status.UNSAT)
    assert result.is_sat == (expected is not None)
    if result.is_sat:
        assert verify_model(inst, result.model)
    return result


def test_empty_formula_sat():
    r = solve(cnf(0, []))
    assert r.is_sat and r.model.num_vars == 0
    assert solve(cnf(3, [])).is_sat


def test_contradictory_units():
    assert solve(cnf(1, [(1,), (-1,)])).is_unsat


def test_verify_model_examples():
    inst = cnf(2, [(1, 2), (-1,)])
    assert verify_model(inst, Model([False, True]))
    assert not verify_model(inst, Model([True, True]))
    with pytest.raises(ValueError):
        verify_model(inst, Model([True]))


def test_model_from_literals():
    assert Model.from_literals([1, -2, 3]).values == (True, False, True)
    with pytest.raises(ValueError):
        Model.from_literals([1, -1])
    with pytest.raises(ValueError):
        Model.from_literals([1, 3])
    m = Model([True, False])
    assert m[1] and not m[2]
    assert m.literals() == [1, -2]


def test_luby_prefix():
    assert [luby(i) for i in range(1, 16)] == [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]


def test_pigeonhole_unsat():
    # 4 pigeons, 3 holes; var p*3+h+1
    clauses = [tuple(p * 3 + h + 1 for h in range(3)) for p in range(4)]
    for h in range(3):
        for p, q in itertools.combinations(range(4), 2):
            clauses.append((-(p * 3 + h + 1), -(q * 3 + h + 1)))
    assert solve(cnf(12, clauses)).is_unsat


def _all_clauses(nv):
    lits = [v for x in range(1, nv + 1) for v in (x, -x)]
    out = []
    for w in range(1, nv + 1):
        for combo in itertools.combinations(lits, w):
            if len({abs(x) for x in combo}) == w:
                out.append(combo)
    return out


# (variables, max clauses): every clause set over that many variables up to the bound
EXHAUSTIVE = [(1, 3), (2, 9), (3, 4), (4, 3)]


@pytest.mark.parametrize("nv, max_clauses", EXHAUSTIVE)
def test_exhaustive_small_cnfs(nv, max_clauses):
    pool = _all_clauses(nv)
    for r in range(max_clauses + 1):
        for cl in itertools.combinations(pool, r):
            agree(cnf(nv, cl))


def test_random_cnfs_vs_truth_table(rng):
    for i in range(10000):
        inst = random_cnf(rng, 20)
        agree(inst, seed=i)


def test_learned_clauses_are_implied(rng):
    for i in range(300):
        inst = random_cnf(rng, 10, ratio=(3.5, 5.0))
        agree(inst, seed=i, check_learned=True)


def test_deterministic_for_fixed_seed():
    inst = build_instance(5)
    a = solve(inst, seed=3).stats
    b = solve(inst, seed=3).stats
    assert (a.conflicts, a.decisions, a.propagations) == (b.conflicts, b.decisions, b.propagations)


def test_conflict_budget_gives_timeout():
    r = Solver(build_instance(6)).solve(max_conflicts=5)
    assert r.status is Status.TIMEOUT
    assert r.model is None
    assert not r.is_unsat
    assert "5 conflicts" in r.budget


def test_time_budget_gives_timeout():
    r = solve(build_instance(6), timeout=0.01)
    assert r.status is Status.TIMEOUT


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_geodesic_instances_unsat(n):
    assert solve(build_instance(n)).is_unsat


def test_parse_external_sat():
    r = parse_external_result("c hello\ns SATISFIABLE\nv 1 -2\nv 3 0\n")
    assert r.is_sat and r.model.literals() == [1, -2, 3]


def test_parse_external_unsat_and_unknown():
    assert parse_external_result("s UNSATISFIABLE\n").is_unsat
    assert parse_external_result("s UNKNOWN\n").status is Status.TIMEOUT


@pytest.mark.parametrize("text", [
    "",
    "c nothing\n",
    "s MAYBE\n",
    "s SATISFIABLE\nv 1 2\n",
    "s SATISFIABLE\nv 1 0\nv 2 0\n",
    "s SATISFIABLE\nv 1 x 0\n",
    "s UNSATISFIABLE\nv 1 0\n",
    "s SATISFIABLE\ns UNSATISFIABLE\n",
    "hello\n",
])
def test_parse_external_malformed(text):
    with pytest.raises(OutputFormatError):
        parse_external_result(text)


def test_parse_external_checks_totality():
    with pytest.raises(OutputFormatError):
        parse_external_result("s SATISFIABLE\nv 1 0\n", num_vars=2)


def test_format_round_trip():
    r = solve(cnf(30, [(i, -(i + 1)) for i in range(1, 30)]))
    text = format_result(r, width=7)
    assert parse_external_result(text) == r


@settings(max_examples=150, deadline=None)
@given(st.lists(st.lists(st.integers(-6, 6).filter(bool), min_size=1, max_size=4, unique_by=abs),
                max_size=25))
def test_solver_matches_truth_table_property(clauses):
    agree(cnf(6, [tuple(c) for c in clauses]))
