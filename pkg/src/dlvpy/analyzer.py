"""Predicate-level dependency analysis: stratification, head-cycle freeness, L1-L5.

Nodes are predicates-with-sign ``(name, arity, negated)``.  An edge ``q -> p``
means some rule with ``p`` in its head mentions ``q`` in its body; head
predicates of one disjunctive rule are linked by ``sibling`` edges in both
directions.  Weak-constraint and constraint bodies add no edges.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional

import networkx as nx

from .core import Program, Rule

Pred = tuple  # (name, arity, negated)

POSITIVE, NEGATIVE, SIBLING = "positive", "negative", "sibling"


@dataclass
class DependencyGraph:
    nodes: set
    edges: dict  # (src, dst) -> set of edge kinds
    components: list  # SCCs (frozensets) in topological order, dependencies first
    component_of: dict
    positive_component_of: dict  # SCC id in the positive-edge subgraph
    positive_cyclic: set  # ids of positive SCCs that contain a cycle

    def kinds(self, src, dst) -> set:
        return self.edges.get((src, dst), set())

    def edges_of_kind(self, kind: str) -> list:
        return [e for e, ks in self.edges.items() if kind in ks]


def build_dependency_graph(p: Program) -> DependencyGraph:
    nodes = set(p.predicates())
    edges: dict = {}

    def add(src, dst, kind):
        edges.setdefault((src, dst), set()).add(kind)

    for r in p.rules:
        heads = [h.predicate for h in r.head]
        for b in r.body:
            if b.atom.is_builtin:
                continue
            for h in heads:
                add(b.literal.predicate, h, NEGATIVE if b.naf else POSITIVE)
        for h1 in heads:
            for h2 in heads:
                if h1 != h2:
                    add(h1, h2, SIBLING)

    g = nx.DiGraph()
    g.add_nodes_from(nodes)
    g.add_edges_from(edges)
    cond = nx.condensation(g)
    order = _stable_topo(cond)
    components = [frozenset(cond.nodes[c]["members"]) for c in order]
    component_of = {n: i for i, comp in enumerate(components) for n in comp}

    pos = nx.DiGraph()
    pos.add_nodes_from(nodes)
    pos.add_edges_from(e for e, ks in edges.items() if POSITIVE in ks)
    positive_component_of, positive_cyclic = {}, set()
    for i, comp in enumerate(nx.strongly_connected_components(pos)):
        for n in comp:
            positive_component_of[n] = i
        if len(comp) > 1 or any(pos.has_edge(n, n) for n in comp):
            positive_cyclic.add(i)
    return DependencyGraph(nodes, edges, components, component_of,
                           positive_component_of, positive_cyclic)


def _stable_topo(cond: nx.DiGraph) -> list:
    # deterministic topological order: ties broken by the smallest member
    key = {c: min(map(repr, cond.nodes[c]["members"])) for c in cond.nodes}
    return list(nx.lexicographical_topological_sort(cond, key=key.__getitem__))


def is_stratified(p: Program, graph: DependencyGraph | None = None
                  ) -> tuple[bool, Optional[dict]]:
    """Return ``(True, levels)`` with a witness level per predicate, or ``(False, None)``.

    Levels satisfy, for every rule: positive body <= head, negative body < head,
    all head predicates equal.
    """
    g = graph or build_dependency_graph(p)
    for (src, dst), kinds in g.edges.items():
        if NEGATIVE in kinds and g.component_of[src] == g.component_of[dst]:
            return False, None
    comp_level = [1] * len(g.components)
    for i, comp in enumerate(g.components):
        for (src, dst), kinds in g.edges.items():
            if dst in comp and g.component_of[src] != i:
                step = 1 if NEGATIVE in kinds else 0
                comp_level[i] = max(comp_level[i], comp_level[g.component_of[src]] + step)
    return True, {n: comp_level[g.component_of[n]] for n in g.nodes}


def is_hcf(p: Program, graph: DependencyGraph | None = None
           ) -> tuple[bool, Optional[Rule]]:
    """Head-cycle freeness at predicate level; returns the first offending rule."""
    g = graph or build_dependency_graph(p)
    for r in p.rules:
        preds = [h.predicate for h in r.head]
        for i, a in enumerate(preds):
            for b in preds[i + 1:]:
                ca, cb = g.positive_component_of[a], g.positive_component_of[b]
                # two heads over one predicate only form a cycle through recursion
                if ca == cb and ca in g.positive_cyclic:
                    return False, r
    return True, None


class EvalClass(enum.Enum):
    L1 = "L1"
    L2 = "L2"
    L3 = "L3"
    L4 = "L4"
    L5 = "L5"


@dataclass
class FragmentClass:
    cls: EvalClass
    has_disjunction: bool
    is_hcf: bool
    has_naf: bool
    is_stratified: bool
    has_weak_constraints: bool
    levels: Optional[dict] = field(default=None, repr=False)
    offending_rule: Optional[Rule] = field(default=None, repr=False)

    def lines(self) -> list[str]:
        flag = lambda b: "true" if b else "false"
        out = [f"class={self.cls.value}",
               f"has_disjunction={flag(self.has_disjunction)}",
               f"is_hcf={flag(self.is_hcf)}",
               f"has_naf={flag(self.has_naf)}",
               f"is_stratified={flag(self.is_stratified)}",
               f"has_weak_constraints={flag(self.has_weak_constraints)}"]
        if self.levels is not None:
            for (name, arity, neg), lvl in sorted(self.levels.items()):
                out.append(f"level.{'-' if neg else ''}{name}/{arity}={lvl}")
        if self.offending_rule is not None:
            out.append(f"head_cycle_rule={self.offending_rule}")
        return out


def classify(p: Program, graph: DependencyGraph | None = None) -> FragmentClass:
    g = graph or build_dependency_graph(p)
    disj = any(r.is_disjunctive for r in p.rules)
    naf = any(b.naf for r in p.rules for b in r.body)
    strat, levels = is_stratified(p, g)
    hcf, bad = is_hcf(p, g)
    wc = bool(p.weak_constraints)
    if not disj and strat:
        cls = EvalClass.L1
    elif hcf:
        cls = EvalClass.L3 if wc else EvalClass.L2
    else:
        cls = EvalClass.L5 if wc else EvalClass.L4
    return FragmentClass(cls, disj, hcf, naf, strat, wc, levels, bad)


# -- ground-level components ------------------------------------------------

@dataclass
class GroundComponents:
    """SCCs of the positive dependency graph over ground literal ids."""
    comp_of: list  # literal id -> component id
    members: list  # component id -> list of literal ids
    hcf: list  # component id -> bool
    rules_into: list  # component id -> rule indices with a head literal in it


def ground_components(n_literals: int, rules: Iterable) -> GroundComponents:
    """``rules`` yields objects with ``head``/``pos`` tuples of literal ids."""
    rules = list(rules)
    g = nx.DiGraph()
    g.add_nodes_from(range(n_literals))
    for r in rules:
        for b in r.pos:
            for h in r.head:
                g.add_edge(b, h)
    comp_of = [0] * n_literals
    members = []
    for i, comp in enumerate(nx.strongly_connected_components(g)):
        members.append(sorted(comp))
        for l in comp:
            comp_of[l] = i
    hcf = [True] * len(members)
    rules_into = [[] for _ in members]
    for ri, r in enumerate(rules):
        seen = set()
        for h in r.head:
            c = comp_of[h]
            if c in seen:
                hcf[c] = False
            else:
                seen.add(c)
                rules_into[c].append(ri)
    return GroundComponents(comp_of, members, hcf, rules_into)
