import pytest
from hypothesis import given, strategies as st

from dlvpy.core import (
    Atom, ClassicalLiteral, GroundAtomIndex, TermKind,
    complement, format_key, is_consistent, is_ground, key_literal, key_sort, literal_key,
    num, string, sym, value_key, var,
)
from dlvpy.parser import parse_program


def lit(name, *args, neg=False):
    return ClassicalLiteral(Atom(name, tuple(args)), neg)


def test_complement_flips_sign():
    assert complement(lit("p", sym("a"))) == lit("p", sym("a"), neg=True)
    assert complement(lit("b", neg=True)) == lit("b")


def test_complement_is_involution():
    q = lit("q", var("X"), var("Y"))
    assert complement(complement(q)) == q


def test_complement_of_builtin_rejected():
    with pytest.raises(ValueError):
        complement(lit("<", num(1), num(2)))


def test_builtins_cannot_be_strongly_negated():
    with pytest.raises(ValueError):
        lit("#int", var("X"), neg=True)


@pytest.mark.parametrize("lits,expected", [
    ([lit("a"), lit("b", neg=True), lit("c")], True),
    ([], True),
    ([lit("p", sym("a")), lit("p", sym("a"), neg=True)], False),
    ([lit("p", sym("a")), lit("p", sym("b"), neg=True)], True),
])
def test_is_consistent(lits, expected):
    assert is_consistent(lits) is expected


def test_is_ground():
    assert is_ground(parse_program("a v -b v c."))
    assert not is_ground(lit("arc", var("X"), var("Y")))
    assert is_ground(parse_program("reachable(a, b) :- arc(a, b).").rules[0])
    # anonymous variables count as variables
    assert not is_ground(parse_program("p :- q(_).").rules[0])


def test_rule_views_partition_literals():
    r = parse_program("a v -b :- c, not d, -e, not -f.").rules[0]
    assert [str(h) for h in r.head] == ["a", "-b"]
    assert [str(l) for l in r.positive_body] == ["c", "-e"]
    assert [str(l) for l in r.negative_body] == ["d", "-f"]
    assert r.is_disjunctive and not r.is_fact and not r.is_constraint


def test_rule_kinds():
    p = parse_program("a. b :- a. :- b.")
    fact, normal, constraint = p.rules
    assert fact.is_fact and fact.is_normal
    assert normal.is_normal and not normal.is_fact
    assert constraint.is_constraint


def test_value_order_int_symbol_string():
    vals = [string("zz"), sym("b"), num(10), sym("a"), num(2)]
    from dlvpy.core import term_value
    ordered = sorted((term_value(t) for t in vals), key=value_key)
    assert ordered == [2, 10, "a", "b", '"zz"']


def test_anonymous_variables_get_fresh_names():
    r = parse_program("p :- q(_, _).").rules[0]
    a, b = r.body[0].atom.args
    assert a.kind is TermKind.ANONYMOUS and a.is_variable
    assert a != b


def test_index_pairs_complements():
    idx = GroundAtomIndex()
    i = idx.intern((False, "p", ("a",)))
    j = idx.complement_id(i)
    assert idx.key(j) == (True, "p", ("a",))
    assert idx.complement_id(j) == i
    assert idx.id((True, "p", ("a",))) == j
    assert idx.intern((True, "p", ("a",))) == j
    assert len(idx) == 2


def test_frozen_index_rejects_new_literals():
    idx = GroundAtomIndex()
    idx.intern((False, "a", ()))
    idx.freeze()
    with pytest.raises(KeyError):
        idx.intern((False, "b", ()))


def test_format_key():
    assert format_key((True, "p", (1, "a"))) == "-p(1,a)"
    assert format_key((False, "a", ())) == "a"


keys = st.tuples(st.booleans(), st.sampled_from("pqr"),
                 st.lists(st.one_of(st.integers(0, 5), st.sampled_from(["a", "b"])),
                          max_size=3).map(tuple))


@given(st.lists(keys, max_size=30))
def test_index_is_a_bijection(ks):
    idx = GroundAtomIndex()
    ids = [idx.intern(k) for k in ks]
    for k, i in zip(ks, ids):
        assert idx.key(i) == k
        assert idx.id(k) == i
        assert literal_key(idx.lookup(i)) == k
    assert len(set(ids)) == len(set(ks))


@given(keys)
def test_key_literal_round_trip(k):
    assert literal_key(key_literal(k)) == k


@given(st.lists(keys, min_size=2, max_size=10))
def test_key_sort_is_total(ks):
    s = sorted(set(ks), key=key_sort)
    assert len({key_sort(k) for k in s}) == len(s)
