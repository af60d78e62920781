"""Stability checking: reduct, closedness, minimality.

``X`` is given as a set of literal ids of the ground program (certain
literals may be left out; they are always added back).  Minimality is
decided per positive-dependency component: on head-cycle-free components by
a founded-support fixpoint, elsewhere by a small DPLL search for a nonempty
unfounded subset.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .grounder import GroundProgram, GroundRule


@dataclass
class CheckResult:
    ok: bool
    witness: Optional[frozenset] = None  # smaller closed set when minimality fails
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


@dataclass
class CheckerStats:
    calls: int = 0
    searches: int = 0
    nodes: int = 0


def _complete(g: GroundProgram, X: Iterable[int]) -> frozenset:
    return frozenset(X) | g.certain


def _check_consistent(g: GroundProgram, X: frozenset):
    comp = g.index.complement_id
    for i in X:
        if comp(i) in X:
            raise ValueError(f"inconsistent interpretation: contains "
                             f"{g.index.format(i)} and {g.index.format(comp(i))}")


def reduct(g: GroundProgram, X: Iterable[int]) -> list:
    """Positive rules left after deleting rules blocked by ``X`` and stripping
    negative bodies.  Weak constraints play no role."""
    X = _complete(g, X)
    return [GroundRule(r.head, r.pos, ()) for r in g.rules
            if not any(n in X for n in r.neg)]


def is_closed(rules: Iterable[GroundRule], X: Iterable[int], g: GroundProgram | None = None
              ) -> bool:
    X = frozenset(X)
    if g is not None:
        X = X | g.certain
        _check_consistent(g, X)
    for r in rules:
        if r.neg:
            raise ValueError("is_closed expects a positive program")
        if all(b in X for b in r.pos) and not any(h in X for h in r.head):
            return False
    return True


def _founded(rules, X: frozenset, atoms: set) -> set:
    """Atoms of ``atoms`` with a supporting rule in the reduct (single true
    head) whose positive body is founded; everything outside ``atoms`` counts
    as founded."""
    missing = {}
    work = []
    for ri, r in enumerate(rules):
        if not any(h in atoms for h in r.head):
            continue
        if not all(b in X for b in r.pos):
            continue
        if sum(1 for h in r.head if h in X) != 1:
            continue
        k = sum(1 for b in r.pos if b in atoms)
        missing[ri] = k
        if k == 0:
            work.append(ri)
    by_pos: dict = {}
    for ri in missing:
        for b in rules[ri].pos:
            if b in atoms:
                by_pos.setdefault(b, []).append(ri)
    founded = set()
    while work:
        ri = work.pop()
        for h in rules[ri].head:
            if h in X and h in atoms and h not in founded:
                founded.add(h)
                for r2 in by_pos.get(h, ()):
                    missing[r2] -= 1
                    if missing[r2] == 0:
                        work.append(r2)
    return founded


def _find_unfounded(rules, X: frozenset, atoms: list, stats: CheckerStats
                    ) -> Optional[set]:
    """Nonempty U within ``atoms`` (all in X) that is unfounded w.r.t. X, or None.

    Variables u_a mean "a is in U".  A reduct rule with body inside X forbids
    U from containing one of its true heads unless some positive body atom is
    in U or another true head stays outside U.
    """
    stats.searches += 1
    var = {a: i for i, a in enumerate(atoms)}
    n = len(atoms)
    clauses = []
    for r in rules:
        if not all(b in X for b in r.pos):
            continue
        hx = [h for h in r.head if h in X]
        if any(h not in var for h in hx):
            continue  # a true head outside the component is never in U
        if not hx:
            continue
        lits = [var[b] + 1 for b in r.pos if b in var] + [-(var[h] + 1) for h in hx]
        clauses.append(lits)
    clauses.append([i + 1 for i in range(n)])
    model = _dpll(clauses, n, stats)
    if model is None:
        return None
    return {atoms[i] for i in range(n) if model[i]}


def _dpll(clauses, n, stats):
    assign = [None] * n
    occurs = [[] for _ in range(n)]
    for ci, c in enumerate(clauses):
        for lit in c:
            occurs[abs(lit) - 1].append(ci)

    def value(lit):
        v = assign[abs(lit) - 1]
        if v is None:
            return None
        return v if lit > 0 else not v

    def unit_propagate(trail):
        changed = True
        while changed:
            changed = False
            for c in clauses:
                unassigned = None
                count = 0
                sat = False
                for lit in c:
                    v = value(lit)
                    if v is True:
                        sat = True
                        break
                    if v is None:
                        count += 1
                        unassigned = lit
                if sat:
                    continue
                if count == 0:
                    return False
                if count == 1:
                    assign[abs(unassigned) - 1] = unassigned > 0
                    trail.append(abs(unassigned) - 1)
                    changed = True
        return True

    def solve():
        stats.nodes += 1
        trail = []
        if not unit_propagate(trail):
            for v in trail:
                assign[v] = None
            return False
        free = [i for i in range(n) if assign[i] is None]
        if not free:
            return True
        v = free[0]
        for choice in (True, False):
            assign[v] = choice
            if solve():
                return True
            assign[v] = None
        for t in trail:
            assign[t] = None
        return False

    return list(assign) if solve() else None


class Checker:
    def __init__(self, g: GroundProgram):
        self.g = g
        self.stats = CheckerStats()

    def is_answer_set(self, X: Iterable[int], method: str = "auto",
                      witness: bool = True) -> CheckResult:
        """``method``: "hcf" (founded-support test, requires HCF program),
        "general" (unfounded-set search everywhere) or "auto" (per component)."""
        g = self.g
        self.stats.calls += 1
        X = _complete(g, X)
        _check_consistent(g, X)
        if g.inconsistent:
            return CheckResult(False, None, "program has no consistent grounding")
        known = g.literal_ids()
        foreign = [i for i in X if i not in known]
        if foreign:
            return CheckResult(False, None, "literal not in program: "
                               + g.index.format(min(foreign)))
        heads = g.head_ids()
        for r in g.rules:
            if all(b in X for b in r.pos) and not any(n in X for n in r.neg) \
                    and not any(h in X for h in r.head):
                return CheckResult(False, None, "not a model: " + g.format_rule(r))
        stray = [i for i in X if i not in heads]
        if stray:
            U = set(stray)
            return CheckResult(False, frozenset(X - U) if witness else None,
                               "unsupported literal " + g.index.format(min(stray)))
        R = reduct(g, X)
        gc = g.components()
        if method == "hcf" and not all(gc.hcf[gc.comp_of[a]] for a in X - g.certain):
            raise ValueError("hcf method used on a program with head cycles")
        by_comp: dict = {}
        for a in X - g.certain:
            by_comp.setdefault(gc.comp_of[a], []).append(a)
        for ci in sorted(by_comp):
            atoms = sorted(by_comp[ci])
            if method != "general" and gc.hcf[ci]:
                aset = set(atoms)
                if len(_founded(R, X, aset)) == len(aset):
                    continue
                if not witness:
                    return CheckResult(False, None, "not minimal")
                U = _find_unfounded(R, X, atoms, self.stats)
                assert U, "founded test and unfounded search disagree"
            else:
                U = _find_unfounded(R, X, atoms, self.stats)
                if U is None:
                    continue
            return CheckResult(False, frozenset(X - U) if witness else None,
                               "not minimal: " + ", ".join(g.index.format(a) for a in sorted(U)))
        return CheckResult(True)


def is_answer_set(g: GroundProgram, X: Iterable[int], method: str = "auto",
                  witness: bool = True) -> CheckResult:
    return Checker(g).is_answer_set(X, method, witness)
