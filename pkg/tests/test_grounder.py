import random

import pytest
from hypothesis import given, settings, strategies as st

from dlvpy.analyzer import EvalClass
from dlvpy.core import format_key
from dlvpy.corpus import load, program
from dlvpy.corpus.generators import Graph
from dlvpy.corpus.randprog import random_batch
from dlvpy.grounder import (
    PSI, GroundingError, GroundingLimitError, builtin_bindings, eval_builtin,
    herbrand_universe, intelligent_ground, naive_ground, resolve_maxint, serialize_ground,
)
from dlvpy.oracle import ground_answer_sets
from dlvpy.parser import parse_program


def keyset(g, ids):
    return {format_key(g.index.key(i)) for i in ids}


def answer_sets(g):
    return {frozenset(g.index.key(i) for i in s) for s in ground_answer_sets(g)}


def test_universe_of_constant_free_program():
    assert herbrand_universe(program("P1")).values() == [PSI]


def test_universe_constants():
    assert herbrand_universe(parse_program("arc(a, b).")).values() == ["a", "b"]


def test_universe_with_integers():
    p = load("sokoban", "right(l1, l2). box(l2, 0). sokoban(l1, 0). solution(l2). top(l1, l3).")
    u = herbrand_universe(p, 6)
    vals = u.values()
    assert list(range(7)) == vals[:7]
    assert {"l1", "l2", "l3", "right", "left", "up", "down"} <= set(vals)


def test_maxint_resolution():
    p = parse_program("#maxint = 4. p(X) :- #int(X).")
    assert resolve_maxint(p) == 4
    assert resolve_maxint(p, 2) == 2
    assert resolve_maxint(parse_program("a.")) == 0


def test_naive_ground_propositional_is_identity():
    g = naive_ground(program("P4"))
    assert sorted(map(g.format_rule, g.rules)) == sorted(
        ["a v -b :- c.", "-b :- not a, not c.", "a v c :- not -b."])


def test_naive_ground_substitutions():
    p = parse_program("reach(X, Y) :- arc(X, Y). arc(a, b).")
    g = naive_ground(p)
    assert sum(1 for r in g.rules if r.pos) == 4


def test_naive_ground_false_builtin_drops_rule():
    g = naive_ground(parse_program("p(X) :- q(X), X < X. q(a)."))
    assert [g.format_rule(r) for r in g.rules] == ["q(a)."]


def test_eval_builtin():
    body = parse_program("p :- 3 < b, b < \"s\", 2 <> 2, #int(6).").rules[0].body
    assert [eval_builtin(b.atom, 6) for b in body] == [True, True, False, True]


def test_builtin_bindings():
    succ2, succ6, plus = parse_program(
        "p :- q(X, Y), #succ(2, Y), #succ(6, Z), +(X, Y, Z).").rules[0].body[1:]
    assert builtin_bindings(succ2.atom, 6) == [{"Y": 3}]
    assert builtin_bindings(succ6.atom, 6) == []
    assert builtin_bindings(plus.atom, 6, {"X": 2, "Y": 3}) == [{"X": 2, "Y": 3, "Z": 5}]
    assert builtin_bindings(plus.atom, 4, {"X": 2, "Y": 3}) == []


def test_unbound_comparison_is_an_error():
    (lt,) = parse_program("p :- X < Y, q(X, Y).").rules[0].body[:1]
    with pytest.raises(GroundingError):
        builtin_bindings(lt.atom)


def test_reach_fully_evaluated():
    g = intelligent_ground(load("reach", "arc(a, b). arc(b, c)."))
    assert g.rules == []
    assert keyset(g, g.certain) == {"arc(a,b)", "arc(b,c)", "reachable(a,b)",
                                    "reachable(b,c)", "reachable(a,c)"}


def test_stratified_normal_program_fully_evaluated():
    p = parse_program("p(1). p(2). q(X) :- p(X), not r(X). r(2). s :- not q(1).")
    g = intelligent_ground(p)
    assert g.rules == []
    assert keyset(g, g.certain) == {"p(1)", "p(2)", "r(2)", "q(1)"}


def test_hampath_two_nodes():
    facts = Graph(2, {(0, 1): None}).facts()
    p = load("hampath", facts)
    g = intelligent_ground(p)
    guesses = [g.format_rule(r) for r in g.rules if len(r.head) == 2]
    assert guesses == ["inPath(0,1) v outPath(0,1)."]
    assert answer_sets(g) == answer_sets(naive_ground(p))


def test_grounding_limit():
    p = parse_program("p(X, Y, Z) :- d(X), d(Y), d(Z). d(1). d(2). d(3). d(4).")
    with pytest.raises(GroundingLimitError):
        naive_ground(p, limit=50)


def test_weight_must_be_positive_integer():
    with pytest.raises(GroundingError):
        intelligent_ground(parse_program("p(a). :~ p(X). [X:1]"))


def test_inconsistent_facts():
    g = intelligent_ground(parse_program("a. -a."))
    assert g.inconsistent
    assert ":- 0 = 0." in serialize_ground(g)


def test_serialize_order():
    text = serialize_ground(intelligent_ground(parse_program("a. b v c :- a. :~ b. [2:1]")))
    assert text == "a.\nb v c.\n:~ b. [2:1]\n"


@pytest.mark.parametrize("name,facts", [
    ("hampath", Graph(3, {(0, 1): None, (1, 2): None, (2, 0): None, (0, 2): None}).facts()),
    ("samegen", "parent(a, b). parent(a, c). parent(b, d)."),
    ("strat", "company(c1). company(c2). company(c3). prod_by(g1, c1, c2). prod_by(g2, c3, c3). contr_by(c1, c2, c3, c3)."),
    ("qbf2", "exists(x). forall(y). term(x, y, y, false, false, false)."),
])
def test_ig_matches_naive_on_corpus(name, facts):
    p = load(name, facts)
    assert answer_sets(intelligent_ground(p)) == answer_sets(naive_ground(p))


def test_ig_matches_naive_on_random_programs():
    for cls, _, p in random_batch(250, seed=11):
        assert answer_sets(intelligent_ground(p)) == answer_sets(naive_ground(p)), cls


def test_l1_residual_empty_and_certain_is_answer_set():
    for cls, _, p in random_batch(100, seed=5):
        if cls is not EvalClass.L1:
            continue
        g = intelligent_ground(p)
        (only,) = answer_sets(naive_ground(p)) or [None]
        if only is None:
            assert g.inconsistent or g.rules
            continue
        if not g.rules:
            assert {g.index.key(i) for i in g.certain} == only


def test_rules_are_simplifications_of_naive_instances():
    p = load("hampath", Graph(3, {(0, 1): None, (1, 2): None, (2, 0): None}).facts())
    ig, ng = intelligent_ground(p), naive_ground(p)
    full = {}
    for r, (src, subst) in zip(ng.rules, ng.provenance):
        full[(src, subst)] = r
    for r, prov in zip(ig.rules, ig.provenance):
        orig = full[prov]
        k = lambda g, ids: {g.index.key(i) for i in ids}
        assert k(ig, r.head) <= k(ng, orig.head)
        assert k(ig, r.pos) <= k(ng, orig.pos)
        assert k(ig, r.neg) <= k(ng, orig.neg)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_grounding_is_deterministic(seed):
    rng = random.Random(seed)
    arcs = {(u, v): rng.randint(1, 9) for u in range(4) for v in range(4)
            if u != v and rng.random() < 0.6}
    p = load("tsp", Graph(4, arcs, kind="tsp").facts())
    assert serialize_ground(intelligent_ground(p)) == serialize_ground(intelligent_ground(p))
