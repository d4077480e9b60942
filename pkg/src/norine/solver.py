"""A small CDCL SAT solver, model checking, and external solver output parsing.

The engine follows the usual MiniSat design: two watched literals, first-UIP
learning with recursive clause minimization, VSIDS branching with phase
saving, Luby restarts and periodic deletion of high-LBD learned clauses.

Internally a literal for variable ``v`` is ``2*v`` (positive) or ``2*v + 1``
(negative), so negation is ``lit ^ 1`` and per-literal arrays are plain lists.
"""

from __future__ import annotations

import enum
import functools
import heapq
import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from norine.cnf import ClauseFamily, CnfInstance


class Status(enum.Enum):
    SAT = "SATISFIABLE"
    UNSAT = "UNSATISFIABLE"
    TIMEOUT = "UNKNOWN"


class OutputFormatError(ValueError):
    pass


class Model:
    """Total assignment; ``model[v]`` is the value of variable ``v`` (1-based)."""

    __slots__ = ("values",)

    def __init__(self, values: Sequence[bool]):
        self.values = tuple(bool(x) for x in values)

    @classmethod
    def from_literals(cls, lits: Iterable[int], num_vars: Optional[int] = None) -> "Model":
        lits = list(lits)
        top = max((abs(x) for x in lits), default=0)
        num_vars = top if num_vars is None else num_vars
        vals: list[Optional[bool]] = [None] * num_vars
        for lit in lits:
            v = abs(lit)
            if v == 0 or v > num_vars:
                raise ValueError(f"literal {lit} outside 1..{num_vars}")
            if vals[v - 1] is not None and vals[v - 1] != (lit > 0):
                raise ValueError(f"variable {v} assigned both ways")
            vals[v - 1] = lit > 0
        missing = [i + 1 for i, x in enumerate(vals) if x is None]
        if missing:
            raise ValueError(f"model not total: {len(missing)} unassigned, first {missing[0]}")
        return cls(vals)

    @property
    def num_vars(self) -> int:
        return len(self.values)

    def __getitem__(self, var: int) -> bool:
        if var < 1:
            raise IndexError(var)
        return self.values[var - 1]

    def literals(self) -> list[int]:
        return [v if val else -v for v, val in enumerate(self.values, 1)]

    def __eq__(self, other):
        return isinstance(other, Model) and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        return f"Model({self.literals()})"


@dataclass
class Stats:
    conflicts: int = 0
    decisions: int = 0
    propagations: int = 0
    restarts: int = 0
    learned: int = 0
    deleted: int = 0
    seconds: float = 0.0


@dataclass
class SolveResult:
    status: Status
    model: Optional[Model] = None
    stats: Stats = field(default_factory=Stats)
    budget: Optional[str] = None

    @property
    def is_sat(self) -> bool:
        return self.status is Status.SAT

    @property
    def is_unsat(self) -> bool:
        return self.status is Status.UNSAT

    def __eq__(self, other):
        if not isinstance(other, SolveResult):
            return NotImplemented
        return self.status == other.status and self.model == other.model


def verify_model(inst: CnfInstance, model: Model) -> bool:
    """Every clause of ``inst`` has a literal made true by ``model``."""
    if model.num_vars < inst.num_vars:
        raise ValueError(f"model covers {model.num_vars} of {inst.num_vars} variables")
    vals = (None,) + model.values
    for clause in inst:
        for lit in clause:
            if vals[lit] if lit > 0 else not vals[-lit]:
                break
        else:
            return False
    return True


def luby(i: int) -> int:
    """The i-th term (1-based) of the Luby sequence 1 1 2 1 1 2 4 ..."""
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    while (1 << k) - 1 != i:
        i -= (1 << (k - 1)) - 1
        k = 1
        while (1 << k) - 1 < i:
            k += 1
    return 1 << (k - 1)


class Solver:
    """Single-use CDCL solver over one instance.

    ``check_learned`` re-derives every learned clause against a truth table
    (instances of at most 20 variables) and raises on a non-implied clause.
    """

    def __init__(self, inst: CnfInstance, seed: int = 0, restart_unit: int = 100,
                 var_decay: float = 0.95, check_learned: bool = False):
        self.num_vars = nv = inst.num_vars
        self.rng = random.Random(seed)
        self.restart_unit = restart_unit
        self.var_decay = var_decay
        self.stats = Stats()
        self.check_learned = check_learned
        if check_learned:
            if nv > 20:
                raise ValueError("check_learned supports at most 20 variables")
            self._originals = [tuple(c) for c in inst]

        self.val = [0] * (2 * nv + 2)      # per literal: 1 true, -1 false, 0 free
        self.level = [0] * (nv + 1)
        self.reason: list[Optional[list]] = [None] * (nv + 1)
        self.phase = [False] * (nv + 1)
        self.activity = [self.rng.random() * 1e-5 for _ in range(nv + 1)]
        self.var_inc = 1.0
        self.watches: list[list[list]] = [[] for _ in range(2 * nv + 2)]
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.clauses: list[list] = []
        self.learnts: list[list] = []
        self.lbd: dict[int, int] = {}
        self.seen = [0] * (nv + 1)
        self.ok = True

        for clause in inst:
            self._add_input_clause(clause)

        self.heap = [(-self.activity[v], v) for v in range(1, nv + 1)]
        heapq.heapify(self.heap)

    # -- setup ---------------------------------------------------------------

    def _add_input_clause(self, clause: Iterable[int]) -> None:
        if not self.ok:
            return
        lits = set()
        for x in clause:
            if x == 0 or abs(x) > self.num_vars:
                raise ValueError(f"literal {x} outside 1..{self.num_vars}")
            lits.add(2 * x if x > 0 else -2 * x + 1)
        if any(l ^ 1 in lits for l in lits):
            return  # tautology
        val = self.val
        if any(val[l] == 1 for l in lits):
            return
        lits = [l for l in sorted(lits) if val[l] != -1]
        if not lits:
            self.ok = False
        elif len(lits) == 1:
            self._enqueue(lits[0], None)
            if self._propagate() is not None:
                self.ok = False
        else:
            self.clauses.append(lits)
            self.watches[lits[0]].append(lits)
            self.watches[lits[1]].append(lits)

    # -- core ----------------------------------------------------------------

    def _enqueue(self, lit: int, reason: Optional[list]) -> None:
        v = lit >> 1
        self.val[lit] = 1
        self.val[lit ^ 1] = -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _propagate(self) -> Optional[list]:
        val = self.val
        watches = self.watches
        trail = self.trail
        level = self.level
        reason = self.reason
        lvl = len(self.trail_lim)
        qhead = self.qhead
        conflict = None
        while qhead < len(trail):
            false_lit = trail[qhead] ^ 1
            qhead += 1
            ws = watches[false_lit]
            i = j = 0
            end = len(ws)
            while i < end:
                c = ws[i]
                i += 1
                first = c[0]
                if first == false_lit:
                    first = c[1]
                    c[0] = first
                    c[1] = false_lit
                if val[first] == 1:
                    ws[j] = c
                    j += 1
                    continue
                for k in range(2, len(c)):
                    lk = c[k]
                    if val[lk] != -1:
                        c[1] = lk
                        c[k] = false_lit
                        watches[lk].append(c)
                        break
                else:
                    ws[j] = c
                    j += 1
                    if val[first] == -1:
                        conflict = c
                        while i < end:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                    else:
                        v = first >> 1
                        val[first] = 1
                        val[first ^ 1] = -1
                        level[v] = lvl
                        reason[v] = c
                        trail.append(first)
            del ws[j:]
            if conflict is not None:
                break
        self.stats.propagations += qhead - self.qhead
        self.qhead = qhead
        return conflict

    def _bump(self, v: int) -> None:
        act = self.activity
        act[v] += self.var_inc
        if act[v] > 1e100:
            for u in range(1, self.num_vars + 1):
                act[u] *= 1e-100
            self.var_inc *= 1e-100
            self._rebuild_heap()
        elif self.val[2 * v] == 0:
            heapq.heappush(self.heap, (-act[v], v))

    def _rebuild_heap(self) -> None:
        act = self.activity
        val = self.val
        self.heap = [(-act[v], v) for v in range(1, self.num_vars + 1) if val[2 * v] == 0]
        heapq.heapify(self.heap)

    def _analyze(self, confl: list) -> tuple[list[int], int]:
        seen = self.seen
        level = self.level
        reason = self.reason
        trail = self.trail
        cur = len(self.trail_lim)
        learnt = [0]
        pending = 0
        p = -1
        idx = len(trail) - 1
        c = confl
        while True:
            for q in (c if p == -1 else c[1:]):
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    seen[v] = 1
                    self._bump(v)
                    if level[v] >= cur:
                        pending += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            c = reason[p >> 1]
            seen[p >> 1] = 0
            pending -= 1
            if pending == 0:
                break
            # reason clauses keep their implied literal at position 0
        learnt[0] = p ^ 1

        # recursive minimization: drop literals implied by the rest
        levels = 0
        for q in learnt[1:]:
            levels |= 1 << (level[q >> 1] & 63)
        cleared = list(learnt)
        kept = [learnt[0]]
        for q in learnt[1:]:
            if reason[q >> 1] is None or not self._redundant(q, levels, cleared):
                kept.append(q)
        for q in cleared:
            seen[q >> 1] = 0
        learnt = kept

        if len(learnt) == 1:
            back = 0
        else:
            best = 1
            for k in range(2, len(learnt)):
                if level[learnt[k] >> 1] > level[learnt[best] >> 1]:
                    best = k
            learnt[1], learnt[best] = learnt[best], learnt[1]
            back = level[learnt[1] >> 1]
        return learnt, back

    def _redundant(self, lit: int, levels: int, cleared: list[int]) -> bool:
        seen = self.seen
        level = self.level
        reason = self.reason
        stack = [lit]
        top = len(cleared)
        while stack:
            c = reason[stack.pop() >> 1]
            for q in c[1:]:
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    if reason[v] is not None and (levels >> (level[v] & 63)) & 1:
                        seen[v] = 1
                        stack.append(q)
                        cleared.append(q)
                    else:
                        for r in cleared[top:]:
                            seen[r >> 1] = 0
                        del cleared[top:]
                        return False
        return True

    def _backtrack(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        val = self.val
        phase = self.phase
        reason = self.reason
        act = self.activity
        heap = self.heap
        trail = self.trail
        stop = self.trail_lim[lvl]
        for k in range(len(trail) - 1, stop - 1, -1):
            lit = trail[k]
            v = lit >> 1
            val[lit] = 0
            val[lit ^ 1] = 0
            reason[v] = None
            phase[v] = not (lit & 1)
            heapq.heappush(heap, (-act[v], v))
        del trail[stop:]
        del self.trail_lim[lvl:]
        self.qhead = stop

    def _decide(self) -> Optional[int]:
        heap = self.heap
        val = self.val
        act = self.activity
        while heap:
            neg, v = heapq.heappop(heap)
            if val[2 * v] == 0 and -neg == act[v]:
                return 2 * v if self.phase[v] else 2 * v + 1
        # stale entries only; fall back to a scan
        for v in range(1, self.num_vars + 1):
            if val[2 * v] == 0:
                return 2 * v if self.phase[v] else 2 * v + 1
        return None

    def _lbd(self, lits: list[int]) -> int:
        level = self.level
        return len({level[q >> 1] for q in lits})

    def _locked(self, c: list) -> bool:
        v = c[0] >> 1
        return self.reason[v] is c and self.val[c[0]] == 1

    def _reduce(self) -> None:
        keep = []
        cand = []
        lbd = self.lbd
        for c in self.learnts:
            if lbd[id(c)] <= 2 or self._locked(c):
                keep.append(c)
            else:
                cand.append(c)
        cand.sort(key=lambda c: (lbd[id(c)], len(c)))
        half = len(cand) // 2
        keep.extend(cand[:half])
        for c in cand[half:]:
            del lbd[id(c)]
        self.stats.deleted += len(cand) - half
        self.learnts = keep
        watches = [[] for _ in range(2 * self.num_vars + 2)]
        for c in itertools.chain(self.clauses, keep):
            watches[c[0]].append(c)
            watches[c[1]].append(c)
        self.watches = watches

    def _check_implied(self, learnt: list[int]) -> None:
        negated = [((q >> 1) if q & 1 else -(q >> 1),) for q in learnt]
        probe = CnfInstance(self.num_vars, [ClauseFamily.stored("probe", self._originals + negated)])
        if truth_table_solve(probe) is not None:
            clause = [-c[0] for c in negated]
            raise AssertionError(f"learned clause {clause} is not implied")

    # -- driver --------------------------------------------------------------

    def solve(self, timeout: Optional[float] = None,
              max_conflicts: Optional[int] = None) -> SolveResult:
        start = time.perf_counter()
        budget = None
        if timeout is not None:
            budget = f"{timeout}s"
        if max_conflicts is not None:
            budget = (budget + ", " if budget else "") + f"{max_conflicts} conflicts"
        result = self._search(start, timeout, max_conflicts)
        self.stats.seconds = time.perf_counter() - start
        result.stats = self.stats
        result.budget = budget
        return result

    def _search(self, start, timeout, max_conflicts) -> SolveResult:
        if not self.ok:
            return SolveResult(Status.UNSAT)
        if self._propagate() is not None:
            self.ok = False
            return SolveResult(Status.UNSAT)
        stats = self.stats
        restart_no = 1
        restart_limit = self.restart_unit * luby(restart_no)
        since_restart = 0
        reduce_at = max(2000, len(self.clauses) // 4)
        while True:
            confl = self._propagate()
            if confl is not None:
                stats.conflicts += 1
                since_restart += 1
                if not self.trail_lim:
                    self.ok = False
                    return SolveResult(Status.UNSAT)
                learnt, back = self._analyze(confl)
                if self.check_learned:
                    self._check_implied(learnt)
                self._backtrack(back)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    self.lbd[id(learnt)] = self._lbd(learnt)
                    self.learnts.append(learnt)
                    self.watches[learnt[0]].append(learnt)
                    self.watches[learnt[1]].append(learnt)
                    self._enqueue(learnt[0], learnt)
                stats.learned += 1
                self.var_inc /= self.var_decay
                if max_conflicts is not None and stats.conflicts >= max_conflicts:
                    return SolveResult(Status.TIMEOUT)
                if timeout is not None and (stats.conflicts & 63) == 0 \
                        and time.perf_counter() - start > timeout:
                    return SolveResult(Status.TIMEOUT)
                continue

            if since_restart >= restart_limit:
                self._backtrack(0)
                stats.restarts += 1
                restart_no += 1
                restart_limit = self.restart_unit * luby(restart_no)
                since_restart = 0
                if len(self.heap) > 8 * self.num_vars + 1024:
                    self._rebuild_heap()
            if len(self.learnts) - len(self.trail) >= reduce_at:
                self._reduce()
                reduce_at += 300

            lit = self._decide()
            if lit is None:
                model = Model([self.val[2 * v] == 1 for v in range(1, self.num_vars + 1)])
                return SolveResult(Status.SAT, model)
            stats.decisions += 1
            self.trail_lim.append(len(self.trail))
            self._enqueue(lit, None)


def solve(inst: CnfInstance, timeout: Optional[float] = None,
          max_conflicts: Optional[int] = None, seed: int = 0, **kw) -> SolveResult:
    """Solve ``inst``; a SAT answer always carries a checked model.

    Running out of ``timeout`` seconds or ``max_conflicts`` gives
    ``Status.TIMEOUT``, never UNSAT.
    """
    result = Solver(inst, seed=seed, **kw).solve(timeout=timeout, max_conflicts=max_conflicts)
    if result.is_sat and not verify_model(inst, result.model):
        raise RuntimeError("solver produced a model that violates the instance")
    return result


@functools.lru_cache(maxsize=32)
def _truth_columns(nv: int) -> tuple[int, tuple[int, ...]]:
    size = 1 << nv
    columns = [0]
    for i in range(nv):
        half = 1 << i
        pattern = ((1 << half) - 1) << half
        width = 2 * half
        while width < size:
            pattern |= pattern << width
            width *= 2
        columns.append(pattern)
    return (1 << size) - 1, tuple(columns)


def truth_table_solve(inst: CnfInstance) -> Optional[Model]:
    """Smallest satisfying assignment (variable 1 = least significant bit), or None.

    Exhaustive over all ``2**num_vars`` assignments at once: bit ``a`` of a
    Python integer stands for assignment ``a``.  A test oracle for up to
    about 20 variables; shares no code with the CDCL engine.
    """
    nv = inst.num_vars
    if nv > 24:
        raise ValueError("truth-table oracle limited to 24 variables")
    everything, columns = _truth_columns(nv)
    alive = everything
    for clause in inst:
        sat = 0
        for lit in clause:
            sat |= columns[lit] if lit > 0 else everything ^ columns[-lit]
        alive &= sat
        if not alive:
            return None
    a = (alive & -alive).bit_length() - 1
    return Model([bool(a >> i & 1) for i in range(nv)])


# -- external solver output ------------------------------------------------

def parse_external_result(text: str, num_vars: Optional[int] = None) -> SolveResult:
    """Read SAT-competition style solver output (``s`` / ``v`` / ``c`` lines)."""
    status = None
    lits: list[int] = []
    terminated = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        if line[0] == "s":
            word = line[1:].strip()
            try:
                new = Status(word)
            except ValueError:
                raise OutputFormatError(f"line {lineno}: unknown status {word!r}") from None
            if status is not None and new is not status:
                raise OutputFormatError(f"line {lineno}: conflicting status lines")
            status = new
        elif line[0] == "v":
            if terminated:
                raise OutputFormatError(f"line {lineno}: value line after terminating 0")
            try:
                vals = [int(x) for x in line[1:].split()]
            except ValueError:
                raise OutputFormatError(f"line {lineno}: non-integer value") from None
            for x in vals:
                if terminated:
                    raise OutputFormatError(f"line {lineno}: value after terminating 0")
                if x == 0:
                    terminated = True
                else:
                    lits.append(x)
        else:
            raise OutputFormatError(f"line {lineno}: unexpected line {line[:40]!r}")
    if status is None:
        raise OutputFormatError("no status line")
    if status is Status.SAT:
        if not terminated:
            raise OutputFormatError("value lines missing or not terminated by 0")
        try:
            model = Model.from_literals(lits, num_vars)
        except ValueError as exc:
            raise OutputFormatError(str(exc)) from None
        return SolveResult(Status.SAT, model)
    if lits:
        raise OutputFormatError(f"value lines with status {status.value}")
    return SolveResult(status)


def format_result(result: SolveResult, width: int = 20) -> str:
    """Competition-style text for ``result`` (inverse of parse_external_result)."""
    lines = [f"s {result.status.value}"]
    if result.is_sat:
        lits = result.model.literals() + [0]
        for k in range(0, len(lits), width):
            lines.append("v " + " ".join(map(str, lits[k:k + width])))
    return "\n".join(lines) + "\n"
