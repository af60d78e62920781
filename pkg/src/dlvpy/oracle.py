"""Brute-force reference semantics.

Everything here works straight from the definitions: ground naively, try
every consistent set of head literals, keep the sets that are models and
have no closed proper subset under their own reduct, and for programs with
weak constraints keep the cheapest by the scalar objective.  Nothing is
shared with the search engine beyond the naive grounder and the literal
index, so the two can be compared.
"""
from __future__ import annotations

from typing import Iterable, Optional

import numpy as np

from .core import Program
from .grounder import GroundProgram, naive_ground
from .parser import parse_program

MAX_BASE = 24
CHUNK = 1 << 20


class OracleRefusal(Exception):
    """The literal base is too large for exhaustive enumeration."""


def _bits(ids, pos) -> int:
    m = 0
    for i in ids:
        m |= 1 << pos[i]
    return m


def _facts(g: GroundProgram) -> frozenset:
    """Literals asserted unconditionally; every answer set contains them."""
    return frozenset(g.certain) | {r.head[0] for r in g.rules
                                   if len(r.head) == 1 and not r.pos and not r.neg}


def _compile(g: GroundProgram, base: list, facts: frozenset):
    """Rules as (pos, neg, head) bit masks over ``base`` with the facts
    already decided: rules satisfied by a fact head, blocked by a fact under
    ``not`` or needing a literal that can never be true are dropped."""
    pos = {l: k for k, l in enumerate(base)}
    out = []
    for head, bp, bn in [(r.head, r.pos, r.neg) for r in g.rules]:
        if any(h in facts for h in head) or any(b in facts for b in bn):
            continue
        bp = [b for b in bp if b not in facts]
        if any(b not in pos for b in bp):
            continue
        out.append((_bits(bp, pos), _bits([b for b in bn if b in pos], pos),
                    _bits([h for h in head if h in pos], pos)))
    return out


def _masks(lo: int, hi: int) -> np.ndarray:
    return np.arange(lo, hi, dtype=np.uint64)


def _models(rules, pairs, k: int) -> list:
    """All consistent masks that satisfy every rule."""
    found = []
    total = 1 << k
    for lo in range(0, total, CHUNK):
        m = _masks(lo, min(total, lo + CHUNK))
        ok = np.ones(len(m), dtype=bool)
        for a, b in pairs:
            ok &= (m & np.uint64(a | b)) != np.uint64(a | b)
        for bp, bn, h in rules:
            bp_, bn_, h_ = np.uint64(bp), np.uint64(bn), np.uint64(h)
            fires = ((m & bp_) == bp_) & ((m & bn_) == 0)
            ok &= ~fires | ((m & h_) != 0)
        found.extend(int(x) for x in m[ok])
    return found


def _submasks(x: int) -> np.ndarray:
    bits = [j for j in range(x.bit_length()) if x >> j & 1]
    idx = np.arange(1 << len(bits), dtype=np.uint64)
    sub = np.zeros_like(idx)
    for t, j in enumerate(bits):
        sub |= ((idx >> np.uint64(t)) & np.uint64(1)) << np.uint64(j)
    return sub


def _minimal(rules, x: int) -> bool:
    """No closed proper subset of ``x`` under the reduct w.r.t. ``x``."""
    red = [(bp, h) for bp, bn, h in rules if bn & x == 0]
    sub = _submasks(x)
    ok = sub != np.uint64(x)
    for bp, h in red:
        bp_, h_ = np.uint64(bp), np.uint64(h)
        ok &= ((sub & bp_) != bp_) | ((sub & h_) != 0)
    return not ok.any()


def _scalar_costs(g: GroundProgram, sets: list) -> list:
    wcs = g.weak_constraints
    if not wcs:
        return [0] * len(sets)
    top = max(w.level for w in wcs)
    wmax = max(w.weight for w in wcs)
    f = [0, 1]
    for _ in range(2, top + 1):
        f.append(f[-1] * len(wcs) * wmax + 1)
    out = []
    for s in sets:
        h = 0
        for w in wcs:
            if all(l in s for l in w.pos) and not any(l in s for l in w.neg):
                h += f[w.level] * w.weight
        out.append(h)
    return out


def _base(g: GroundProgram, facts: frozenset) -> list:
    comp = g.index.complement_id
    return sorted(l for l in g.head_ids() if l not in facts and comp(l) not in facts)


def ground_answer_sets(g: GroundProgram, optimal: bool = True) -> list:
    """Answer sets of a ground program as frozensets of literal ids."""
    if g.inconsistent:
        return []
    comp = g.index.complement_id
    facts = _facts(g)
    if any(comp(l) in facts for l in facts):
        return []
    base = _base(g, facts)
    if len(base) > MAX_BASE:
        raise OracleRefusal(f"{len(base)} undecided head literals, limit {MAX_BASE}")
    pos = {l: k for k, l in enumerate(base)}
    pairs = [(1 << pos[l], 1 << pos[comp(l)]) for l in base
             if comp(l) in pos and l < comp(l)]
    rules = _compile(g, base, facts)
    sets = []
    for x in _models(rules, pairs, len(base)):
        if _minimal(rules, x):
            sets.append(facts | {base[j] for j in range(len(base)) if x >> j & 1})
    if optimal and g.weak_constraints and sets:
        costs = _scalar_costs(g, sets)
        best = min(costs)
        sets = [s for s, c in zip(sets, costs) if c == best]
    return sets


def oracle_answer_sets(p: Program | str, maxint: Optional[int] = None,
                       optimal: bool = True) -> set:
    """Answer sets as a set of frozensets of literal keys."""
    if isinstance(p, str):
        p = parse_program(p)
    g = naive_ground(p, maxint=maxint)
    return {frozenset(g.index.key(i) for i in s) for s in ground_answer_sets(g, optimal)}


def oracle_is_answer_set(g: GroundProgram, X: Iterable[int]) -> bool:
    """Definition check of one candidate (weak constraints ignored)."""
    X = frozenset(X) | g.certain
    if g.inconsistent or any(g.index.complement_id(l) in X for l in X):
        return False
    if not X <= g.head_ids():
        return False
    base = sorted(X)
    pos = {l: k for k, l in enumerate(base)}
    x = (1 << len(base)) - 1
    rules = []
    for bp, bn, h in [((), (), [l]) for l in sorted(g.certain)] + [(r.pos, r.neg, r.head) for r in g.rules]:
        fires_neg = any(b in X for b in bn)
        if any(b not in X for b in bp):
            continue  # body false under X, and under every subset
        rules.append((_bits(bp, pos), x if fires_neg else 0, _bits([l for l in h if l in X], pos)))
    for bp, bn, h in rules:
        if bn == 0 and h == 0:
            return False  # X violates a rule it makes applicable
    if len(base) > MAX_BASE:
        raise OracleRefusal(f"candidate with {len(base)} literals, limit {MAX_BASE}")
    return _minimal(rules, x)
