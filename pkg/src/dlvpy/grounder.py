"""Instantiation: the literal textbook grounding and the intelligent grounder.

Both produce a :class:`GroundProgram` over a :class:`GroundAtomIndex`.  The
intelligent grounder walks predicate components bottom-up; components made
only of normal rules without internal negation, and depending only on such
components, are evaluated completely and end up as ``certain`` literals.
Everything else is instantiated over the atoms that could possibly be derived
and then simplified against the certain part.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .analyzer import NEGATIVE, build_dependency_graph, ground_components
from .core import (
    ARITHMETIC, COMPARISONS, Atom, GroundAtomIndex, NafLiteral, Program, Term,
    TermKind, format_key, key_sort, term_value, value_key,
)

DEFAULT_LIMIT = 10 ** 7
PSI = "_psi"


class GroundingError(Exception):
    """Instantiation failed (bad built-in binding, ill-typed weight, ...)."""


class GroundingLimitError(GroundingError):
    pass


@dataclass(frozen=True)
class HerbrandUniverse:
    constants: frozenset
    maxint: int = 0
    with_integers: bool = False

    def values(self) -> list:
        vals = set(self.constants)
        if self.with_integers:
            vals.update(range(self.maxint + 1))
        if not vals:
            vals.add(PSI)
        return sorted(vals, key=value_key)

    def __len__(self) -> int:
        return len(self.values())

    def __contains__(self, v) -> bool:
        return v in self.values()


@dataclass(frozen=True, slots=True)
class GroundRule:
    head: tuple
    pos: tuple = ()
    neg: tuple = ()

    @property
    def is_constraint(self) -> bool:
        return not self.head


@dataclass(frozen=True, slots=True)
class GroundWeak:
    pos: tuple
    neg: tuple
    weight: int = 1
    level: int = 1


@dataclass
class GroundProgram:
    index: GroundAtomIndex
    rules: list
    weak_constraints: list = field(default_factory=list)
    certain: frozenset = frozenset()
    inconsistent: bool = False
    # (source statement number, sorted substitution) per rule
    provenance: list = field(default_factory=list)
    maxint: int = 0
    _components: object = field(default=None, repr=False)

    def components(self):
        if self._components is None:
            self._components = ground_components(len(self.index), self.rules)
        return self._components

    def literal_ids(self) -> set:
        out = set(self.certain)
        for r in self.rules:
            out.update(r.head, r.pos, r.neg)
        for w in self.weak_constraints:
            out.update(w.pos, w.neg)
        return out

    def head_ids(self) -> set:
        out = set(self.certain)
        for r in self.rules:
            out.update(r.head)
        return out

    def format_rule(self, r: GroundRule) -> str:
        f = self.index.format
        body = [f(i) for i in r.pos] + ["not " + f(i) for i in r.neg]
        head = " v ".join(f(i) for i in r.head)
        if not body:
            return head + "."
        return f"{head} :- {', '.join(body)}." if head else f":- {', '.join(body)}."

    def format_weak(self, w: GroundWeak) -> str:
        f = self.index.format
        body = [f(i) for i in w.pos] + ["not " + f(i) for i in w.neg]
        return f":~ {', '.join(body)}. [{w.weight}:{w.level}]"

    @property
    def size(self) -> int:
        return len(self.rules) + len(self.weak_constraints)


def resolve_maxint(p: Program, maxint: Optional[int] = None) -> int:
    """Command-line value wins over a ``#maxint = N.`` directive; default 0."""
    if maxint is not None:
        return maxint
    return p.maxint if p.maxint is not None else 0


def _terms(p: Program) -> Iterable[Term]:
    for r in p.rules:
        for h in r.head:
            yield from h.atom.args
        for b in r.body:
            yield from b.atom.args
    for w in p.weak_constraints:
        for b in w.body:
            yield from b.atom.args
        yield w.weight
        yield w.level


def herbrand_universe(p: Program, maxint: int = 0) -> HerbrandUniverse:
    if maxint < 0:
        raise ValueError("maxint must be non-negative")
    consts, ints = set(), False
    for t in _terms(p):
        if t.kind in (TermKind.SYMBOL, TermKind.STRING, TermKind.INTEGER):
            consts.add(term_value(t))
            ints = ints or t.kind is TermKind.INTEGER
        elif t.kind is TermKind.MAXINT:
            ints = True
    for r in p.rules:
        ints = ints or any(b.atom.predicate in ARITHMETIC for b in r.body)
    for w in p.weak_constraints:
        ints = ints or any(b.atom.predicate in ARITHMETIC for b in w.body)
    return HerbrandUniverse(frozenset(consts), maxint, ints)


# -- built-ins ----------------------------------------------------------------

def _holds(pred: str, vals: tuple, maxint: int) -> bool:
    if pred in COMPARISONS:
        a, b = vals
        if pred == "=":
            return a == b
        if pred == "<>":
            return a != b
        ka, kb = value_key(a), value_key(b)
        return {"<": ka < kb, ">": ka > kb, "<=": ka <= kb, ">=": ka >= kb}[pred]
    if not all(isinstance(v, int) for v in vals):
        return False
    if any(v < 0 or v > maxint for v in vals):
        return False
    if pred == "#int":
        return True
    if pred == "#succ":
        return vals[1] == vals[0] + 1
    if pred == "+":
        return vals[0] + vals[1] == vals[2]
    if pred == "*":
        return vals[0] * vals[1] == vals[2]
    raise ValueError(f"unknown built-in {pred}")


def eval_builtin(atom: Atom, maxint: int = 0) -> bool:
    """Truth value of a ground built-in atom."""
    vals = tuple(maxint if t.kind is TermKind.MAXINT else term_value(t) for t in atom.args)
    return _holds(atom.predicate, vals, maxint)


def _bind_builtin(pred, vals, maxint):
    """Candidate completions for a partially bound built-in (None = unbound).

    Returns a list of full value tuples, or None when the pattern is unsupported.
    """
    def ok(v):
        return isinstance(v, int) and 0 <= v <= maxint

    if None not in vals:
        return [vals] if _holds(pred, vals, maxint) else []
    if pred == "#int":
        return [(i,) for i in range(maxint + 1)]
    if pred == "#succ":
        x, y = vals
        if x is not None:
            return [(x, x + 1)] if ok(x) and ok(x + 1) else []
        if y is not None:
            return [(y - 1, y)] if ok(y) and ok(y - 1) else []
        return None
    if pred in ("+", "*"):
        x, y, z = vals
        if x is None or y is None:
            return None
        if not (ok(x) and ok(y)):
            return []
        z = x + y if pred == "+" else x * y
        return [(x, y, z)] if z <= maxint else []
    return None


def builtin_bindings(atom: Atom, maxint: int = 0, subst: Optional[dict] = None) -> list:
    """Substitutions extending ``subst`` that make the built-in true.

    Raises GroundingError for binding patterns that cannot be enumerated,
    such as a comparison with an unbound side.
    """
    subst = dict(subst or {})
    vals = []
    for t in atom.args:
        if t.kind is TermKind.MAXINT:
            vals.append(maxint)
        elif t.is_variable:
            vals.append(subst.get(t.value))
        else:
            vals.append(term_value(t))
    res = _bind_builtin(atom.predicate, tuple(vals), maxint)
    if res is None:
        raise GroundingError(f"built-in {atom} cannot bind its arguments")
    out = []
    for full in res:
        s = dict(subst)
        for t, v in zip(atom.args, full):
            if t.is_variable and s.setdefault(t.value, v) != v:
                break
        else:
            out.append(s)
    return out


# -- compiled literals ----------------------------------------------------------

class _Lit:
    __slots__ = ("kind", "pk", "pattern", "vars", "pred")

    def __init__(self, nlit, maxint):
        atom = nlit.atom
        self.pred = atom.predicate
        if atom.is_builtin:
            self.kind = "builtin"
        else:
            self.kind = "neg" if nlit.naf else "pos"
        self.pk = (atom.predicate, atom.arity, nlit.literal.negated)
        pat = []
        for t in atom.args:
            if t.is_variable:
                pat.append((True, t.value))
            elif t.kind is TermKind.MAXINT:
                pat.append((False, maxint))
            else:
                pat.append((False, term_value(t)))
        self.pattern = tuple(pat)
        self.vars = frozenset(v for isv, v in pat if isv)

    def ground(self, s) -> tuple:
        return tuple(s[v] if isv else v for isv, v in self.pattern)

    def key(self, s) -> tuple:
        name, _, neg = self.pk
        return (neg, name, self.ground(s))


def _head_lit(cl, maxint) -> _Lit:
    return _Lit(NafLiteral(cl), maxint)


def _weight_value(t: Term, s, maxint):
    if t.is_variable:
        v = s.get(t.value)
    elif t.kind is TermKind.MAXINT:
        v = maxint
    else:
        v = term_value(t)
    return v if isinstance(v, int) and v >= 1 else None


class _Relations:
    """Possible/certain tuples per predicate with lazily built hash indexes."""

    def __init__(self):
        self.possible: dict = {}
        self.certain: dict = {}
        self.delta: dict = {}
        self._idx: dict = {}

    def get(self, pk, source="full") -> set:
        return (self.delta if source == "delta" else self.possible).get(pk, set())

    def reset_indexes(self):
        self._idx.clear()

    def lookup(self, pk, source, positions, key):
        ck = (pk, source, positions)
        idx = self._idx.get(ck)
        if idx is None:
            idx = {}
            for tup in self.get(pk, source):
                idx.setdefault(tuple(tup[i] for i in positions), []).append(tup)
            self._idx[ck] = idx
        return idx.get(key, ())


def _plan(body, rels, delta_at, initially_bound=frozenset()):
    """Greedy join order: filters as soon as evaluable, then connected
    smallest-first relation literals; ``#int`` enumeration as a last resort."""
    bound = set(initially_bound)
    todo = list(range(len(body)))
    steps = []

    def evaluable(l):
        known = [(not isv) or v in bound for isv, v in l.pattern]
        if l.kind == "neg" or l.pred in COMPARISONS or l.pred == "#int":
            return all(known)
        if l.pred == "#succ":
            return any(known)
        return known[0] and known[1]

    while todo:
        progress = True
        while progress:
            progress = False
            for i in list(todo):
                l = body[i]
                if l.kind != "pos" and evaluable(l):
                    steps.append((i, "full"))
                    bound |= l.vars
                    todo.remove(i)
                    progress = True
        if not todo:
            break
        rel = [i for i in todo if body[i].kind == "pos"]
        if delta_at is not None and delta_at in todo:
            pick = delta_at
        elif rel:
            def score(i):
                l = body[i]
                size = len(rels.get(l.pk))
                connected = bool(l.vars & bound) or not l.vars
                return (not connected, size, i)
            pick = min(rel, key=score)
        else:
            ints = [i for i in todo if body[i].pred == "#int"]
            if not ints:
                bad = body[todo[0]]
                raise GroundingError(f"unsupported binding pattern for built-in {bad.pred}")
            pick = ints[0]
        steps.append((pick, "delta" if pick == delta_at else "full"))
        bound |= body[pick].vars
        todo.remove(pick)
    return steps


def _join(body, steps, rels, maxint, certain_check):
    """Yield substitutions (the same mutable dict; copy what you need)."""
    s: dict = {}
    n = len(steps)

    def run(k):
        if k == n:
            yield s
            return
        i, source = steps[k]
        l = body[i]
        if l.kind == "neg":
            if not certain_check(l.pk, l.ground(s)):
                yield from run(k + 1)
            return
        if l.kind == "builtin":
            vals = tuple((s.get(v) if isv else v) for isv, v in l.pattern)
            cands = _bind_builtin(l.pred, vals, maxint)
            if cands is None:
                raise GroundingError(f"unsupported binding pattern for built-in {l.pred}")
            it = cands
        else:
            positions, key = [], []
            for j, (isv, v) in enumerate(l.pattern):
                if not isv:
                    positions.append(j)
                    key.append(v)
                elif v in s:
                    positions.append(j)
                    key.append(s[v])
            if positions:
                it = rels.lookup(l.pk, source, tuple(positions), tuple(key))
            else:
                it = rels.get(l.pk, source)
        for tup in it:
            newly = []
            ok = True
            for (isv, v), x in zip(l.pattern, tup):
                if isv:
                    cur = s.get(v, _UNBOUND)
                    if cur is _UNBOUND:
                        s[v] = x
                        newly.append(v)
                    elif cur != x:
                        ok = False
                        break
                elif v != x:
                    ok = False
                    break
            if ok:
                yield from run(k + 1)
            for v in newly:
                del s[v]

    return run(0)


_UNBOUND = object()


# -- intelligent grounding ------------------------------------------------------

class _Builder:
    """Collects ground rules keyed by literal keys before final indexing."""

    def __init__(self, limit):
        self.limit = limit
        self.count = 0
        self.rules: dict = {}  # (head, pos, neg) keys -> provenance
        self.weak: dict = {}

    def bump(self):
        self.count += 1
        if self.count > self.limit:
            raise GroundingLimitError(f"more than {self.limit} ground instances")

    def add_rule(self, head, pos, neg, prov):
        self.bump()
        k = (tuple(sorted(set(head))), tuple(sorted(set(pos))), tuple(sorted(set(neg))))
        self.rules.setdefault(k, prov)

    def add_weak(self, pos, neg, w, l, prov):
        self.bump()
        k = (frozenset(pos), frozenset(neg), w, l)
        self.weak.setdefault(k, prov)


def intelligent_ground(p: Program, maxint: Optional[int] = None, *,
                       universe: HerbrandUniverse | None = None,
                       limit: int = DEFAULT_LIMIT) -> GroundProgram:
    """Ground ``p`` keeping only instances over derivable atoms."""
    if universe is not None and maxint is None:
        maxint = universe.maxint
    maxint = resolve_maxint(p, maxint)
    graph = build_dependency_graph(p)
    rels = _Relations()
    out = _Builder(limit)
    solved_preds: set = set()

    by_comp: dict = {}
    constraints = []
    for ri, r in enumerate(p.rules):
        if r.is_constraint:
            constraints.append(ri)
        else:
            by_comp.setdefault(graph.component_of[r.head[0].predicate], []).append(ri)

    compiled = {}
    for ri, r in enumerate(p.rules):
        compiled[ri] = ([_head_lit(h, maxint) for h in r.head],
                        [_Lit(b, maxint) for b in r.body])

    def certain_check(pk, tup):
        return tup in rels.certain.get(pk, ())

    for ci, comp in enumerate(graph.components):
        rule_ids = by_comp.get(ci, [])
        internal_neg = any(NEGATIVE in ks and src in comp and dst in comp
                           for (src, dst), ks in graph.edges.items())
        external = {b.literal.predicate for ri in rule_ids for b in p.rules[ri].body
                    if not b.atom.is_builtin} - comp
        solved = (all(p.rules[ri].is_normal for ri in rule_ids) and not internal_neg
                  and external <= solved_preds)
        _ground_component(p, comp, rule_ids, compiled, rels, out, maxint,
                          certain_check, solved)
        if solved:
            solved_preds |= comp
            for pk in comp:
                rels.certain[pk] = rels.possible.setdefault(pk, set())

    rels.delta = {}
    rels.reset_indexes()
    for ri in constraints:
        _, body = compiled[ri]
        steps = _plan(body, rels, None)
        for s in _join(body, steps, rels, maxint, certain_check):
            pos = [l.key(s) for l in body if l.kind == "pos"]
            neg = [l.key(s) for l in body if l.kind == "neg"]
            out.add_rule((), pos, neg, (ri, tuple(sorted(s.items()))))

    nrules = len(p.rules)
    for wi, w in enumerate(p.weak_constraints):
        body = [_Lit(b, maxint) for b in w.body]
        steps = _plan(body, rels, None)
        for s in _join(body, steps, rels, maxint, lambda pk, tup: False):
            wt = _weight_value(w.weight, s, maxint)
            lv = _weight_value(w.level, s, maxint)
            if wt is None or lv is None:
                raise GroundingError(f"weak constraint {w} has a non-positive or "
                                     f"non-integer weight/level under {dict(s)}")
            pos = [l.key(s) for l in body if l.kind == "pos"]
            neg = [l.key(s) for l in body if l.kind == "neg"]
            out.add_weak(pos, neg, wt, lv, (nrules + wi, tuple(sorted(s.items()))))

    certain_keys = set()
    for pk, tups in rels.certain.items():
        name, _, neg = pk
        certain_keys.update((neg, name, t) for t in tups)
    return _finalize(out, certain_keys, maxint, simplify=True)


def _ground_component(p, comp, rule_ids, compiled, rels, out, maxint,
                      certain_check, solved):
    for pk in comp:
        rels.possible.setdefault(pk, set())
    delta: dict = {}
    first = True
    while first or any(delta.values()):
        rels.delta = delta
        rels.reset_indexes()
        new: dict = {}
        for ri in rule_ids:
            heads, body = compiled[ri]
            if first:
                variants = [None]
            else:
                variants = [i for i, l in enumerate(body)
                            if l.kind == "pos" and l.pk in comp and delta.get(l.pk)]
            for at in variants:
                steps = _plan(body, rels, at)
                for s in _join(body, steps, rels, maxint, certain_check):
                    for h in heads:
                        tup = h.ground(s)
                        if tup not in rels.possible[h.pk]:
                            new.setdefault(h.pk, set()).add(tup)
                    if solved:
                        out.bump()
                    else:
                        pos = [l.key(s) for l in body if l.kind == "pos"]
                        neg = [l.key(s) for l in body if l.kind == "neg"]
                        out.add_rule([h.key(s) for h in heads], pos, neg,
                                     (ri, tuple(sorted(s.items()))))
        for pk, tups in new.items():
            rels.possible[pk] |= tups
        delta = new
        first = False


def _finalize(out: _Builder, certain_keys: set, maxint: int, simplify: bool
              ) -> GroundProgram:
    rules = [(list(h), list(b), list(n), prov) for (h, b, n), prov in out.rules.items()]
    inconsistent = False
    if simplify:
        rules, certain_keys, inconsistent = _simplify(rules, certain_keys)
    # deterministic ids: intern in the canonical literal order
    keys = set(certain_keys)
    for h, b, n, _ in rules:
        keys.update(h, b, n)
    for (pos, neg, _, _) in out.weak:
        keys.update(pos, neg)
    index = GroundAtomIndex()
    for k in sorted(keys, key=key_sort):
        neg, name, args = k
        if k not in index and (not neg, name, args) not in index:
            index.intern((False, name, args))
    index.freeze()

    def ids(ks):
        return tuple(sorted(index.id(k) for k in set(ks)))

    grules = {}
    for h, b, n, prov in rules:
        gr = GroundRule(ids(h), ids(b), ids(n))
        grules.setdefault(gr, prov)
    order = sorted(grules, key=lambda r: (len(r.head) == 0, r.head, r.pos, r.neg))
    gweak = {}
    for (pos, neg, w, l), prov in out.weak.items():
        gweak.setdefault(GroundWeak(ids(pos), ids(neg), w, l), prov)
    worder = sorted(gweak, key=lambda w: (-w.level, w.pos, w.neg, w.weight))
    certain = frozenset(index.id(k) for k in certain_keys)
    if any(index.complement_id(i) in certain for i in certain):
        inconsistent = True
    return GroundProgram(index, order, worder, certain, inconsistent,
                         [grules[r] for r in order], maxint)


def _simplify(rules, certain):
    """Fixpoint simplification against certain and unsupported literals."""
    certain = set(certain)
    inconsistent = False
    alive = [True] * len(rules)
    heads_of: dict = {}
    pos_of: dict = {}
    neg_of: dict = {}
    support: dict = {}
    for ri, (h, b, n, _) in enumerate(rules):
        for k in h:
            heads_of.setdefault(k, []).append(ri)
            support[k] = support.get(k, 0) + 1
        for k in b:
            pos_of.setdefault(k, []).append(ri)
        for k in n:
            neg_of.setdefault(k, []).append(ri)

    def comp(k):
        return (not k[0], k[1], k[2])

    def is_false(k):
        return (k not in certain and support.get(k, 0) == 0) or comp(k) in certain

    work = list(range(len(rules)))
    queued = set(work)

    def kill(ri):
        if not alive[ri]:
            return
        alive[ri] = False
        for k in rules[ri][0]:
            support[k] -= 1
            if support[k] == 0 and k not in certain:
                touch(k)

    def touch(k):
        for table in (heads_of, pos_of, neg_of):
            for ri in table.get(k, ()):
                if alive[ri] and ri not in queued:
                    queued.add(ri)
                    work.append(ri)
        c = comp(k)
        for table in (heads_of, pos_of, neg_of):
            for ri in table.get(c, ()):
                if alive[ri] and ri not in queued:
                    queued.add(ri)
                    work.append(ri)

    while work:
        ri = work.pop()
        queued.discard(ri)
        if not alive[ri]:
            continue
        h, b, n, prov = rules[ri]
        if any(k in certain for k in h) or any(is_false(k) for k in b) \
                or any(k in certain for k in n):
            kill(ri)
            continue
        h2 = [k for k in h if comp(k) not in certain]
        b2 = [k for k in b if k not in certain]
        n2 = [k for k in n if not is_false(k)]
        if len(h2) != len(h):
            for k in set(h) - set(h2):
                support[k] -= 1
                if support[k] == 0:
                    touch(k)
        rules[ri] = (h2, b2, n2, prov)
        if not b2 and not n2:
            if not h2:
                inconsistent = True
                alive[ri] = False
            elif len(h2) == 1:
                k = h2[0]
                kill(ri)
                if k not in certain:
                    certain.add(k)
                    if comp(k) in certain:
                        inconsistent = True
                    touch(k)
    return [r for ri, r in enumerate(rules) if alive[ri]], certain, inconsistent


# -- naive grounding ------------------------------------------------------------

def naive_ground(p: Program, universe: HerbrandUniverse | None = None,
                 maxint: Optional[int] = None, *, limit: int = DEFAULT_LIMIT
                 ) -> GroundProgram:
    """All substitutions over the universe; only built-ins are evaluated."""
    if universe is None:
        universe = herbrand_universe(p, resolve_maxint(p, maxint))
    m = universe.maxint
    values = universe.values()
    out = _Builder(limit)

    def substitutions(vars_):
        vs = sorted(vars_)
        total = len(values) ** len(vs)
        if out.count + total > limit:
            raise GroundingLimitError(f"more than {limit} ground instances")
        for combo in itertools.product(values, repeat=len(vs)):
            yield dict(zip(vs, combo))

    def instantiate(body, s):
        pos, neg = [], []
        for l in body:
            if l.kind == "builtin":
                if not _holds(l.pred, l.ground(s), m):
                    return None
            elif l.kind == "pos":
                pos.append(l.key(s))
            else:
                neg.append(l.key(s))
        return pos, neg

    for ri, r in enumerate(p.rules):
        heads = [_head_lit(h, m) for h in r.head]
        body = [_Lit(b, m) for b in r.body]
        names = {t.value for t in r.variables()}
        for s in substitutions(names):
            inst = instantiate(body, s)
            if inst is not None:
                out.add_rule([h.key(s) for h in heads], inst[0], inst[1],
                             (ri, tuple(sorted(s.items()))))
    nrules = len(p.rules)
    for wi, w in enumerate(p.weak_constraints):
        body = [_Lit(b, m) for b in w.body]
        names = {t.value for t in w.variables()}
        for s in substitutions(names):
            inst = instantiate(body, s)
            if inst is None:
                continue
            wt, lv = _weight_value(w.weight, s, m), _weight_value(w.level, s, m)
            if wt is None or lv is None:
                continue
            out.add_weak(inst[0], inst[1], wt, lv, (nrules + wi, tuple(sorted(s.items()))))
    return _finalize(out, set(), m, simplify=False)


def serialize_ground(g: GroundProgram) -> str:
    """Certain atoms as facts, then rules, then weak constraints."""
    lines = [format_key(g.index.key(i)) + "." for i in sorted(g.certain)]
    if g.inconsistent:
        lines.append(":- 0 = 0.")
    lines.extend(g.format_rule(r) for r in g.rules)
    lines.extend(g.format_weak(w) for w in g.weak_constraints)
    return "".join(l + "\n" for l in lines)


def ground(p: Program, maxint: Optional[int] = None, *, intelligent: bool = True,
           limit: int = DEFAULT_LIMIT) -> GroundProgram:
    if intelligent:
        return intelligent_ground(p, maxint, limit=limit)
    return naive_ground(p, maxint=maxint, limit=limit)
