"""Seeded instance generators, each paired with a brute-force reference."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Optional


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


# -- Ramsey ------------------------------------------------------------------------

def gen_ramsey(k: int, m: int, n: int) -> str:
    """Clique facts plus a program that has an answer set iff K_n can be
    2-coloured with neither a red k-clique nor a blue m-clique."""
    if k < 2 or m < 2 or n < 1:
        raise ValueError("need k, m >= 2 and n >= 1")
    lines = [" ".join(f"node({i})." for i in range(1, n + 1))]
    lines += [f"arc({i}, {j})." for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    lines.append("blue(X, Y) v red(X, Y) :- arc(X, Y).")
    for colour, size in (("red", k), ("blue", m)):
        vs = [f"X{i}" for i in range(1, size + 1)]
        body = [f"{colour}({a}, {b})" for a, b in itertools.combinations(vs, 2)]
        lines.append(":- " + ", ".join(body) + ".")
    return "\n".join(lines) + "\n"


def ramsey_colouring_exists(k: int, m: int, n: int) -> bool:
    """Exhaustive search over all 2-colourings of K_n."""
    edges = list(itertools.combinations(range(n), 2))
    pos = {e: i for i, e in enumerate(edges)}
    kc = [[pos[e] for e in itertools.combinations(c, 2)]
          for c in itertools.combinations(range(n), k)]
    mc = [[pos[e] for e in itertools.combinations(c, 2)]
          for c in itertools.combinations(range(n), m)]
    kmask = [sum(1 << i for i in c) for c in kc]
    mmask = [sum(1 << i for i in c) for c in mc]
    full = (1 << len(edges)) - 1
    for red in range(1 << len(edges)):
        blue = full ^ red
        if any(red & c == c for c in kmask):
            continue
        if any(blue & c == c for c in mmask):
            continue
        return True
    return False


# -- 2QBF ----------------------------------------------------------------------------

@dataclass
class QBF:
    """exists X forall Y (t1 or ... or tk), each ti a conjunction of three
    literals ``(var, positive)``."""
    exists: list
    forall: list
    terms: list

    def facts(self) -> str:
        return gen_2qbf(self)

    def valid(self) -> bool:
        for xs in itertools.product((False, True), repeat=len(self.exists)):
            sx = dict(zip(self.exists, xs))
            if all(self._holds({**sx, **dict(zip(self.forall, ys))})
                   for ys in itertools.product((False, True), repeat=len(self.forall))):
                return True
        return False

    def witnesses(self) -> list:
        out = []
        for xs in itertools.product((False, True), repeat=len(self.exists)):
            sx = dict(zip(self.exists, xs))
            if all(self._holds({**sx, **dict(zip(self.forall, ys))})
                   for ys in itertools.product((False, True), repeat=len(self.forall))):
                out.append(sx)
        return out

    def _holds(self, s) -> bool:
        return any(all(s[v] == sign for v, sign in t) for t in self.terms)


def gen_2qbf(phi: QBF) -> str:
    lines = [f"exists({x})." for x in phi.exists] + [f"forall({y})." for y in phi.forall]
    for t in phi.terms:
        if len(t) != 3:
            raise ValueError(f"disjunct {t} does not have three literals")
        ps = [v if sign else "true" for v, sign in t]
        qs = ["false" if sign else v for v, sign in t]
        lines.append(f"term({', '.join(ps + qs)}).")
    return "\n".join(lines) + "\n"


def random_qbf(nx: int, ny: int, nterms: int, seed=None) -> QBF:
    rng = _rng(seed)
    xs = [f"x{i}" for i in range(1, nx + 1)]
    ys = [f"y{i}" for i in range(1, ny + 1)]
    pool = xs + ys
    terms = []
    for _ in range(nterms):
        vs = rng.sample(pool, min(3, len(pool)))
        while len(vs) < 3:
            vs.append(rng.choice(pool))
        terms.append([(v, rng.random() < 0.5) for v in vs])
    return QBF(xs, ys, terms)


# -- strategic companies ----------------------------------------------------------

@dataclass
class StratInstance:
    companies: list
    prod_by: list  # (product, c1, c2, c3, c4)
    contr_by: list  # (company, x1, x2, x3, x4)
    required: tuple = (1, 2)

    def facts(self) -> str:
        lines = [" ".join(f"company({c})." for c in self.companies)]
        lines += [f"prod_by({', '.join(map(str, t))})." for t in self.prod_by]
        lines += [f"contr_by({', '.join(map(str, t))})." for t in self.contr_by]
        return "\n".join(lines) + "\n"

    def production_preserving(self, s: frozenset) -> bool:
        if not all(any(c in s for c in t[1:]) for t in self.prod_by):
            return False
        return all(t[0] in s for t in self.contr_by if all(c in s for c in t[1:]))

    def strategic_sets(self) -> list:
        """All subset-minimal production-preserving sets."""
        pp = [frozenset(s) for r in range(len(self.companies) + 1)
              for s in itertools.combinations(self.companies, r)
              if self.production_preserving(frozenset(s))]
        return [s for s in pp if not any(o < s for o in pp)]

    def strategic_sets_with_required(self) -> list:
        return [s for s in self.strategic_sets() if set(self.required) <= s]


def gen_stratcomp(n: int, seed=None, products_per_company: int = 3,
                  controls_per_company: int = 10) -> StratInstance:
    """``3n`` products with up to four producers and ``10`` controlling
    quadruples per company, all drawn uniformly from the ``n`` companies."""
    if n < 2:
        raise ValueError("need at least two companies")
    rng = _rng(seed)
    comps = list(range(1, n + 1))
    prod = []
    for g in range(1, products_per_company * n + 1):
        prod.append((f"g{g}",) + tuple(rng.choice(comps) for _ in range(4)))
    contr = set()
    for c in comps:
        others = [o for o in comps if o != c]
        for _ in range(controls_per_company):
            contr.add((c,) + tuple(rng.choice(others) for _ in range(4)))
    return StratInstance(comps, prod, sorted(contr))


# -- graphs -----------------------------------------------------------------------------

@dataclass
class Graph:
    n: int
    arcs: dict  # (u, v) -> cost (None for unweighted)
    start: int = 0
    kind: str = "hampath"

    @property
    def nodes(self) -> list:
        return list(range(self.n))

    def facts(self) -> str:
        lines = [" ".join(f"node({v})." for v in self.nodes), f"start({self.start})."]
        for (u, v), c in sorted(self.arcs.items()):
            lines.append(f"arc({u}, {v})." if c is None else f"arc({u}, {v}, {c}).")
        return "\n".join(lines) + "\n"

    def hamiltonian_paths(self) -> set:
        """Arc sets of all paths from the start node through every node once."""
        rest = [v for v in self.nodes if v != self.start]
        out = set()
        for perm in itertools.permutations(rest):
            seq = (self.start,) + perm
            steps = list(zip(seq, seq[1:]))
            if all(s in self.arcs for s in steps):
                out.add(frozenset(steps))
        return out

    def hamiltonian_cycles(self) -> set:
        out = set()
        rest = [v for v in self.nodes if v != self.start]
        for perm in itertools.permutations(rest):
            seq = (self.start,) + perm + (self.start,)
            steps = list(zip(seq, seq[1:]))
            if all(s in self.arcs for s in steps):
                out.add(frozenset(steps))
        return out

    def min_tour_cost(self) -> Optional[int]:
        costs = [sum(self.arcs[s] for s in c) for c in self.hamiltonian_cycles()]
        return min(costs) if costs else None


def gen_graph(kind: str, n: int, density: float = 0.5, seed=None) -> Graph:
    """Random digraph on nodes 0..n-1 starting at 0; ``tsp`` adds costs in 1..10."""
    if kind not in ("hampath", "tsp"):
        raise ValueError(f"unknown graph kind {kind!r}")
    if n < 2:
        raise ValueError("need at least two nodes")
    rng = _rng(seed)
    arcs = {}
    for u in range(n):
        for v in range(n):
            if u != v and rng.random() < density:
                arcs[(u, v)] = rng.randint(1, 10) if kind == "tsp" else None
    return Graph(n, arcs, 0, kind)
