import itertools
import random

import pytest

from norine.cube import Color, Coloring, num_edges


@pytest.fixture(scope="session")
def orbits8():
    from norine.orbits import enumerate_orbits

    return enumerate_orbits(8)


@pytest.fixture
def rng():
    return random.Random(20240607)


def random_coloring(rng, n):
    return Coloring(n, rng.getrandbits(num_edges(n)))


def naive_mono_geodesic(c, u, color):
    """Walk every coordinate order; no dynamic programming."""
    n = c.n
    for order in itertools.permutations(range(n)):
        w = u
        ok = True
        for d in order:
            if c.between(w, w ^ (1 << d)) != color:
                ok = False
                break
            w ^= 1 << d
        if ok:
            return True
    return False


def random_cnf(rng, max_vars, max_clauses=None, ratio=(1.5, 6.0)):
    from norine.cnf import CnfInstance

    nv = rng.randint(1, max_vars)
    if max_clauses is None:
        m = int(nv * rng.uniform(*ratio)) + 1
    else:
        m = rng.randint(0, max_clauses)
    clauses = []
    for _ in range(m):
        w = min(nv, rng.choice((1, 2, 3, 3, 3, 4)))
        vs = rng.sample(range(1, nv + 1), w)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return CnfInstance.from_clauses(nv, clauses)


RED, BLUE = Color.RED, Color.BLUE


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS):
        terminalreporter.write_line(line)
