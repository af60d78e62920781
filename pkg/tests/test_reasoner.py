import random

import pytest
from hypothesis import given, settings, strategies as st

from dlvpy.analyzer import EvalClass
from dlvpy.corpus import load, program
from dlvpy.corpus.generators import StratInstance
from dlvpy.corpus.randprog import random_program
from dlvpy.oracle import oracle_answer_sets
from dlvpy.parser import parse_program
from dlvpy.reasoner import (
    SolveConfig, answer_sets, brave, cautious, check_model, format_model, solve,
)

from conftest import as_strings, fam


def test_brave_examples():
    assert brave(program("P1"), "a")[0]
    assert brave(program("P6'"), "a") == (False, None)
    assert brave(program("Pwc"), "b") == (False, None)


def test_brave_returns_witness():
    ok, m = brave(program("P1"), "-b")
    assert ok and format_model(m) == "{-b}"


def test_cautious_examples():
    assert cautious(program("P3"), "c") == (True, None)
    ok, m = cautious(program("P1"), "a")
    assert not ok and format_model(m) == "{-b}"
    assert cautious(program("P6'"), "zzz") == (True, None)
    assert cautious(program("Pwc"), "d")[0]


def test_non_ground_query_rejected():
    with pytest.raises(ValueError):
        brave(load("reach", "arc(a, b)."), "reachable(X, b)")


def test_solve_p1_three_models():
    res = solve(program("P1"))
    assert as_strings(res.models) == fam({"a"}, {"-b"}, {"c"})
    assert res.cost.per_level == ()


def test_limit():
    assert len(solve(program("P1"), SolveConfig(limit=2)).models) == 2


def test_reach_uses_no_search():
    res = solve(load("reach", "arc(1, 2). arc(2, 3). arc(3, 1)."))
    assert res.stats["class"] == "L1"
    assert res.stats["choices"] == 0 and res.stats["ground_rules"] == 0
    (m,) = res.models
    assert sum(1 for k in m if k[1] == "reachable") == 9


def test_strat_one_to_one():
    inst = StratInstance([1, 2, 3, 4], [("g1", 1, 2), ("g2", 3, 3), ("g3", 2, 4)],
                         [(1, 3, 4)])
    facts = [" ".join(f"company({c})." for c in inst.companies)]
    facts += [f"prod_by({g}, {a}, {b})." for g, a, b in inst.prod_by]
    facts += [f"contr_by({w}, {x}, {y}, {y})." for w, x, y in inst.contr_by]
    res = solve(load("strat", "\n".join(facts)))
    got = {frozenset(k[2][0] for k in m if k[1] == "strat") for m in res.models}
    # brute force with 2-ary producers and controllers
    import itertools

    def preserving(s):
        if not all(a in s or b in s for _, a, b in inst.prod_by):
            return False
        return all(w in s for w, x, y in inst.contr_by if x in s and y in s)
    pp = [frozenset(c) for r in range(5) for c in itertools.combinations([1, 2, 3, 4], r)
          if preserving(set(c))]
    want = {s for s in pp if not any(o < s for o in pp)}
    assert got == want


def test_maxint_flag_beats_directive():
    p = parse_program("#maxint = 1. n(X) :- #int(X).")
    assert len(next(iter(answer_sets(p)))) == 2
    assert len(next(iter(answer_sets(p, maxint=3)))) == 4


def test_check_model():
    p = program("P4")
    assert check_model(p, [(True, "b", ())]).ok
    assert not check_model(p, [(False, "c", ())]).ok
    assert not check_model(p, [(False, "zz", ())]).ok
    assert not check_model(p, [(False, "a", ()), (True, "a", ())]).ok


def test_check_model_needs_certain_literals():
    p = load("reach", "arc(a, b).")
    assert not check_model(p, []).ok
    assert check_model(p, [(False, "arc", ("a", "b")), (False, "reachable", ("a", "b"))]).ok


def test_format_model_filter():
    m = frozenset({(False, "p", (2,)), (False, "p", (10,)), (True, "q", ("a",))})
    assert format_model(m) == "{p(2), p(10), -q(a)}"
    assert format_model(m, {"q"}) == "{-q(a)}"


classes = st.sampled_from(list(EvalClass))


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10 ** 9), classes)
def test_forcing_general_path_keeps_results(seed, cls):
    _, p = random_program(cls, random.Random(seed))
    base = set(solve(p).models)
    for forced in (EvalClass.L4, EvalClass.L5):
        assert set(solve(p, SolveConfig(force_class=forced)).models) == base


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10 ** 9), classes, st.integers(0, 7), st.booleans())
def test_brave_and_cautious_match_enumeration(seed, cls, atom, neg):
    _, p = random_program(cls, random.Random(seed))
    q = (neg, "abcdefgh"[atom], ())
    sets = oracle_answer_sets(p)
    assert brave(p, q)[0] == any(q in s for s in sets)
    assert cautious(p, q)[0] == all(q in s for s in sets)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10 ** 9), classes)
def test_solver_matches_oracle(seed, cls):
    _, p = random_program(cls, random.Random(seed))
    assert set(solve(p).models) == oracle_answer_sets(p)
