import random

import pytest
from hypothesis import given, settings, strategies as st

from dlvpy.checker import Checker, is_answer_set, is_closed, reduct
from dlvpy.corpus import load, program
from dlvpy.corpus.generators import QBF
from dlvpy.corpus.randprog import random_batch
from dlvpy.grounder import GroundRule, intelligent_ground, naive_ground
from dlvpy.oracle import ground_answer_sets, oracle_is_answer_set
from dlvpy.parser import parse_program


def ids(g, *names):
    out = set()
    for n in names:
        neg = n.startswith("-")
        out.add(g.index.id((neg, n.lstrip("-"), ())))
    return out


def fmt(g, rules):
    return sorted(g.format_rule(r) for r in rules)


def test_reduct_p4():
    g = naive_ground(program("P4"))
    assert fmt(g, reduct(g, ids(g, "-b"))) == ["-b.", "a v -b :- c."]


def test_reduct_of_positive_program_is_itself():
    g = naive_ground(parse_program("a v b. c :- a."))
    assert fmt(g, reduct(g, ids(g, "a"))) == fmt(g, g.rules)


def test_reducts_at_c_and_a_coincide():
    g = naive_ground(program("P4"))
    assert fmt(g, reduct(g, ids(g, "c"))) == fmt(g, reduct(g, ids(g, "a")))


def test_is_closed():
    g = naive_ground(program("P4"))
    K = ids(g, "c")
    assert not is_closed(reduct(g, K), K)
    assert is_closed([], K)
    g5 = naive_ground(program("P5"))
    assert is_closed(g5.rules, ids(g5, "a"))


def test_is_closed_usage_errors():
    g = naive_ground(parse_program("a v -a."))
    with pytest.raises(ValueError):
        is_closed(g.rules, ids(g, "a", "-a"), g)
    with pytest.raises(ValueError):
        is_closed([GroundRule((0,), (), (2,))], set())


@pytest.mark.parametrize("name,model,ok", [
    ("P4", ["-b"], True),
    ("P4", ["a"], True),
    ("P4", ["c"], False),
    ("P2", ["a"], False),
    ("P2", ["c"], True),
    ("P6", ["a", "b"], True),
    ("P6'", ["a", "b"], False),
    ("P10", ["a", "b"], True),
    ("P9", ["a", "b"], False),
])
def test_is_answer_set_examples(name, model, ok):
    g = naive_ground(program(name))
    for method in ("auto", "general"):
        assert is_answer_set(g, ids(g, *model), method).ok is ok


def test_closedness_failure_reported():
    g = naive_ground(program("P2"))
    res = is_answer_set(g, ids(g, "a"))
    assert not res.ok and "not a model" in res.reason


def test_foreign_literal_rejected():
    g = naive_ground(parse_program("a v b. c :- d."))
    d = g.index.id((False, "d", ()))
    res = is_answer_set(g, ids(g, "a") | {d})
    assert not res.ok


def test_hcf_method_refuses_head_cycles():
    g = naive_ground(program("P10"))
    with pytest.raises(ValueError):
        is_answer_set(g, ids(g, "a", "b"), "hcf")


def test_qbf_candidate_missing_saturation():
    q = QBF(["x"], ["y"], [[("x", True), ("y", True), ("y", True)],
                           [("x", True), ("y", False), ("y", False)]])
    g = intelligent_ground(load("qbf2", q.facts()))
    (answer,) = ground_answer_sets(g)
    assert Checker(g).is_answer_set(answer).ok
    ty, fy = g.index.id((False, "t", ("y",))), g.index.id((False, "f", ("y",)))
    for drop in ({ty}, {fy}, {ty, fy}):
        assert not Checker(g).is_answer_set(answer - drop).ok


def _candidates(g, rng, n):
    base = sorted(g.head_ids())
    comp = g.index.complement_id
    seen = set()
    for _ in range(n):
        X = set()
        for l in base:
            if rng.random() < 0.5 and comp(l) not in X:
                X.add(l)
        seen.add(frozenset(X))
    return seen


def test_agrees_with_exhaustive_minimality():
    rng = random.Random(0)
    for cls, _, p in random_batch(150, seed=21):
        g = naive_ground(p)
        hcf = all(g.components().hcf)
        checker = Checker(g)
        for X in _candidates(g, rng, 40) | {frozenset(s) for s in ground_answer_sets(g, False)}:
            want = oracle_is_answer_set(g, X)
            assert checker.is_answer_set(X, "auto").ok is want
            assert checker.is_answer_set(X, "general").ok is want
            if hcf:
                assert checker.is_answer_set(X, "hcf").ok is want


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_reduct_idempotent_and_witnesses_valid(seed):
    rng = random.Random(seed)
    _, _, p = random_batch(5, seed=seed)[seed % 5]
    g = naive_ground(p)
    comp = g.index.complement_id
    for X in _candidates(g, rng, 10):
        R = reduct(g, X)
        assert reduct(type(g)(g.index, R), X) == R
        res = Checker(g).is_answer_set(X, "auto")
        if res.ok:
            assert is_closed([GroundRule(r.head, r.pos, ()) for r in g.rules
                              if not any(n in X for n in r.neg)], X)
            for r in g.rules:
                if all(b in X for b in r.pos) and not any(b in X for b in r.neg):
                    assert any(h in X for h in r.head)
        elif res.witness is not None:
            W = res.witness
            assert W < X
            assert not any(comp(l) in W for l in W)
            assert is_closed(R, W)
