"""Weak-constraint costs and optimal answer sets.

Costs are compared as per-level vectors, highest level first; the scalar
objective is only computed for reporting.  Optimal models are found in two
passes: branch-and-bound to fix the optimal vector, then a second search
that keeps every answer set reaching it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import total_ordering
from typing import Callable, Iterable, Optional

from .grounder import GroundProgram, GroundWeak


@total_ordering
@dataclass(frozen=True)
class CostVector:
    # level -> total violated weight (only levels present in the program)
    per_level: tuple = ()  # ((level, weight), ...) highest level first
    scalar: Optional[int] = None

    def weight(self, level: int) -> int:
        return dict(self.per_level).get(level, 0)

    def key(self) -> tuple:
        return tuple(w for _, w in self.per_level)

    def __lt__(self, other: "CostVector") -> bool:
        return _cmp(self, other) < 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, CostVector):
            return NotImplemented
        return _cmp(self, other) == 0

    def __hash__(self):
        return hash(tuple((l, w) for l, w in self.per_level if w))

    def format(self) -> str:
        pairs = ",".join(f"[{w}:{l}]" for l, w in self.per_level)
        return f"Cost ([Weight:Level]): <{pairs}>"


def _cmp(a: CostVector, b: CostVector) -> int:
    da, db = dict(a.per_level), dict(b.per_level)
    for l in sorted(set(da) | set(db), reverse=True):
        x, y = da.get(l, 0), db.get(l, 0)
        if x != y:
            return -1 if x < y else 1
    return 0


def violated(wcs: Iterable[GroundWeak], A: Iterable[int]) -> dict:
    """level -> list of violated weak constraints."""
    A = frozenset(A)
    out: dict = {}
    for w in wcs:
        out.setdefault(w.level, [])
        if all(l in A for l in w.pos) and not any(l in A for l in w.neg):
            out[w.level].append(w)
    return out


def level_factors(wcs: list) -> dict:
    """f(1) = 1, f(n) = f(n-1) * |WC| * w_max + 1 for each level up to the top."""
    if not wcs:
        return {}
    top = max(w.level for w in wcs)
    wmax = max(w.weight for w in wcs)
    f = {1: 1}
    for n in range(2, top + 1):
        f[n] = f[n - 1] * len(wcs) * wmax + 1
    return f


def cost(wcs: list, A: Iterable[int]) -> CostVector:
    wcs = list(wcs)
    v = violated(wcs, A)
    per = {l: sum(w.weight for w in ws) for l, ws in v.items()}
    f = level_factors(wcs)
    scalar = sum(f[l] * x for l, x in per.items()) if wcs else 0
    return CostVector(tuple(sorted(per.items(), reverse=True)), scalar)


def upper_bound(wcs: list) -> int:
    """Scalar cost when every weak constraint is violated."""
    f = level_factors(wcs)
    return sum(f[w.level] * w.weight for w in wcs)


@dataclass
class OptimizerStats:
    phase1_models: int = 0
    phase2_models: int = 0
    improvements: int = 0


@dataclass
class OptimumResult:
    models: list
    cost: Optional[CostVector]
    stats: OptimizerStats = field(default_factory=OptimizerStats)


def solve_optimal(g: GroundProgram, make_generator: Callable, accept: Callable,
                  limit: Optional[int] = None) -> OptimumResult:
    """``make_generator()`` returns a fresh ModelGenerator over ``g``;
    ``accept(model)`` runs the stability check on a candidate."""
    stats = OptimizerStats()
    wcs = g.weak_constraints
    if not wcs:
        out = []
        for m in make_generator().models():
            if accept(m):
                out.append(m)
                if limit is not None and len(out) >= limit:
                    break
        return OptimumResult(out, cost(wcs, ()) if out else None, stats)

    # phase 1: branch and bound on the per-level vector (highest level first)
    mg = make_generator()
    best = None
    for m in mg.models():
        if not accept(m):
            continue
        stats.phase1_models += 1
        vec = _vector(mg, wcs, m)
        if best is None or vec < best:
            best = vec
            stats.improvements += 1
            mg.bound = list(best)
            mg.bound_strict = True
    if best is None:
        return OptimumResult([], None, stats)

    # phase 2: every answer set whose cost equals the optimum
    mg = make_generator()
    mg.bound = list(best)
    mg.bound_strict = False
    out = []
    for m in mg.models():
        if _vector(mg, wcs, m) != best or not accept(m):
            continue
        stats.phase2_models += 1
        out.append(m)
        if limit is not None and len(out) >= limit:
            break
    return OptimumResult(out, cost(wcs, out[0]), stats)


def _vector(mg, wcs, m) -> tuple:
    v = violated(wcs, m)
    return tuple(sum(w.weight for w in v.get(l, ())) for l in mg.levels)
