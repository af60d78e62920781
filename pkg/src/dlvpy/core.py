"""Abstract syntax for disjunctive programs with strong negation and weak constraints.

Everything here is immutable.  Ground constants are mapped to plain Python
values by :func:`term_value` (``int`` for integers, ``str`` for symbols and
``'"text"'`` for quoted strings) so the grounder can hash tuples of them
cheaply; :func:`value_key` gives the total order used by comparisons.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union


class TermKind(enum.Enum):
    VARIABLE = "variable"
    SYMBOL = "symbol"
    INTEGER = "integer"
    STRING = "string"
    ANONYMOUS = "anonymous"
    # ``#maxint``: an integer placeholder resolved when grounding
    MAXINT = "maxint"


@dataclass(frozen=True, slots=True)
class Term:
    kind: TermKind
    value: Union[str, int]

    @property
    def is_variable(self) -> bool:
        return self.kind in (TermKind.VARIABLE, TermKind.ANONYMOUS)

    def __str__(self) -> str:
        if self.kind is TermKind.ANONYMOUS:
            return "_"
        if self.kind is TermKind.STRING:
            return f'"{self.value}"'
        if self.kind is TermKind.MAXINT:
            return "#maxint"
        return str(self.value)


def var(name: str) -> Term:
    return Term(TermKind.VARIABLE, name)


def sym(name: str) -> Term:
    return Term(TermKind.SYMBOL, name)


def num(value: int) -> Term:
    if value < 0:
        raise ValueError("integer constants are non-negative")
    return Term(TermKind.INTEGER, value)


def string(text: str) -> Term:
    return Term(TermKind.STRING, text)


MAXINT = Term(TermKind.MAXINT, "#maxint")


def term_value(term: Term) -> Union[int, str]:
    """Ground value of a constant term."""
    if term.kind is TermKind.INTEGER:
        return term.value
    if term.kind is TermKind.SYMBOL:
        return term.value
    if term.kind is TermKind.STRING:
        return f'"{term.value}"'
    raise ValueError(f"{term} is not a constant")


def value_term(value: Union[int, str]) -> Term:
    if isinstance(value, int):
        return Term(TermKind.INTEGER, value)
    if value.startswith('"'):
        return Term(TermKind.STRING, value[1:-1])
    return Term(TermKind.SYMBOL, value)


def value_key(value: Union[int, str]) -> tuple:
    """Total order on ground values: integers < symbols < quoted strings."""
    if isinstance(value, int):
        return (0, value, "")
    if value.startswith('"'):
        return (2, 0, value[1:-1])
    return (1, 0, value)


def format_value(value: Union[int, str]) -> str:
    return str(value)


# built-in predicates; comparisons never bind variables
COMPARISONS = frozenset({"=", "<", ">", "<>", "<=", ">="})
ARITHMETIC = frozenset({"#int", "#succ", "+", "*"})
BUILTINS = COMPARISONS | ARITHMETIC
BUILTIN_ARITY = {"#int": 1, "#succ": 2, "+": 3, "*": 3, **{op: 2 for op in COMPARISONS}}


@dataclass(frozen=True, slots=True)
class Atom:
    predicate: str
    args: tuple[Term, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def is_builtin(self) -> bool:
        return self.predicate in BUILTINS

    @property
    def is_comparison(self) -> bool:
        return self.predicate in COMPARISONS

    def variables(self) -> Iterator[Term]:
        return (t for t in self.args if t.is_variable)

    def __str__(self) -> str:
        p, a = self.predicate, self.args
        if p in COMPARISONS:
            return f"{a[0]} {p} {a[1]}"
        if not a:
            return p
        return f"{p}({', '.join(map(str, a))})"


@dataclass(frozen=True, slots=True)
class ClassicalLiteral:
    atom: Atom
    negated: bool = False

    def __post_init__(self):
        if self.negated and self.atom.is_builtin:
            raise ValueError("built-in atoms cannot be strongly negated")

    @property
    def predicate(self) -> tuple[str, int, bool]:
        """Predicate-with-sign key: ``p`` and ``-p`` are distinct."""
        return (self.atom.predicate, self.atom.arity, self.negated)

    def __str__(self) -> str:
        return ("-" if self.negated else "") + str(self.atom)


@dataclass(frozen=True, slots=True)
class NafLiteral:
    literal: ClassicalLiteral
    naf: bool = False

    @property
    def atom(self) -> Atom:
        return self.literal.atom

    def __str__(self) -> str:
        return ("not " if self.naf else "") + str(self.literal)


@dataclass(frozen=True, slots=True)
class Rule:
    head: tuple[ClassicalLiteral, ...]
    body: tuple[NafLiteral, ...] = ()

    @property
    def is_constraint(self) -> bool:
        return not self.head

    @property
    def is_normal(self) -> bool:
        return len(self.head) == 1

    @property
    def is_disjunctive(self) -> bool:
        return len(self.head) > 1

    @property
    def is_fact(self) -> bool:
        return bool(self.head) and not self.body

    @property
    def positive_body(self) -> tuple[ClassicalLiteral, ...]:
        return tuple(b.literal for b in self.body if not b.naf)

    @property
    def negative_body(self) -> tuple[ClassicalLiteral, ...]:
        return tuple(b.literal for b in self.body if b.naf)

    def variables(self) -> set[Term]:
        out = {t for h in self.head for t in h.atom.variables()}
        out.update(t for b in self.body for t in b.atom.variables())
        return out

    def __str__(self) -> str:
        head = " v ".join(map(str, self.head))
        if not self.body:
            return f"{head}."
        body = ", ".join(map(str, self.body))
        return f"{head} :- {body}." if head else f":- {body}."


@dataclass(frozen=True, slots=True)
class WeakConstraint:
    body: tuple[NafLiteral, ...]
    weight: Term = field(default_factory=lambda: num(1))
    level: Term = field(default_factory=lambda: num(1))

    @property
    def positive_body(self) -> tuple[ClassicalLiteral, ...]:
        return tuple(b.literal for b in self.body if not b.naf)

    @property
    def negative_body(self) -> tuple[ClassicalLiteral, ...]:
        return tuple(b.literal for b in self.body if b.naf)

    def variables(self) -> set[Term]:
        out = {t for b in self.body for t in b.atom.variables()}
        out.update(t for t in (self.weight, self.level) if t.is_variable)
        return out

    def __str__(self) -> str:
        return f":~ {', '.join(map(str, self.body))}. [{self.weight}:{self.level}]"


@dataclass(frozen=True, slots=True)
class Program:
    rules: tuple[Rule, ...] = ()
    weak_constraints: tuple[WeakConstraint, ...] = ()
    # value of a ``#maxint = N.`` directive, if the text had one
    maxint: int | None = None

    def __add__(self, other: "Program") -> "Program":
        maxint = other.maxint if other.maxint is not None else self.maxint
        return Program(self.rules + other.rules,
                       self.weak_constraints + other.weak_constraints, maxint)

    def predicates(self) -> set[tuple[str, int, bool]]:
        preds = set()
        for r in self.rules:
            preds.update(h.predicate for h in r.head)
            preds.update(b.literal.predicate for b in r.body if not b.atom.is_builtin)
        for w in self.weak_constraints:
            preds.update(b.literal.predicate for b in w.body if not b.atom.is_builtin)
        return preds


def complement(lit: ClassicalLiteral) -> ClassicalLiteral:
    """``p`` <-> ``-p``."""
    if lit.atom.is_builtin:
        raise ValueError(f"built-in literal {lit} has no complement")
    return ClassicalLiteral(lit.atom, not lit.negated)


def is_consistent(literals: Iterable[ClassicalLiteral]) -> bool:
    seen = set(literals)
    return not any(ClassicalLiteral(l.atom, not l.negated) in seen for l in seen if l.negated)


def is_ground(x) -> bool:
    if isinstance(x, Term):
        return not x.is_variable
    if isinstance(x, Atom):
        return all(is_ground(t) for t in x.args)
    if isinstance(x, ClassicalLiteral):
        return is_ground(x.atom)
    if isinstance(x, NafLiteral):
        return is_ground(x.literal.atom)
    if isinstance(x, Rule):
        return all(is_ground(h) for h in x.head) and all(is_ground(b) for b in x.body)
    if isinstance(x, WeakConstraint):
        return (all(is_ground(b) for b in x.body)
                and is_ground(x.weight) and is_ground(x.level))
    if isinstance(x, Program):
        return all(map(is_ground, x.rules)) and all(map(is_ground, x.weak_constraints))
    raise TypeError(f"cannot decide groundness of {type(x).__name__}")


# A ground literal key is (negated, predicate, args) with args a tuple of
# ground values.  GroundAtomIndex interns these keys as dense ids.
LiteralKey = tuple


def literal_key(lit: ClassicalLiteral) -> LiteralKey:
    return (lit.negated, lit.atom.predicate, tuple(term_value(t) for t in lit.atom.args))


def key_literal(key: LiteralKey) -> ClassicalLiteral:
    neg, pred, args = key
    return ClassicalLiteral(Atom(pred, tuple(value_term(v) for v in args)), neg)


def key_sort(key: LiteralKey) -> tuple:
    neg, pred, args = key
    return (pred, len(args), tuple(value_key(v) for v in args), neg)


def format_key(key: LiteralKey) -> str:
    neg, pred, args = key
    s = pred if not args else f"{pred}({','.join(map(format_value, args))})"
    return "-" + s if neg else s


class GroundAtomIndex:
    """Bijection between ground classical literals and dense ids.

    Interning a literal also interns its complement, so ``complement_id`` is
    total over the index.
    """

    def __init__(self):
        self._ids: dict[LiteralKey, int] = {}
        self._keys: list[LiteralKey] = []
        self._complement: list[int] = []
        self._frozen = False

    def intern(self, key: LiteralKey) -> int:
        i = self._ids.get(key)
        if i is not None:
            return i
        if self._frozen:
            raise KeyError(f"index is frozen; unknown literal {format_key(key)}")
        neg, pred, args = key
        i = len(self._keys)
        self._ids[key] = i
        self._ids[(not neg, pred, args)] = i + 1
        self._keys.append(key)
        self._keys.append((not neg, pred, args))
        self._complement.extend((i + 1, i))
        return i

    def freeze(self) -> "GroundAtomIndex":
        self._frozen = True
        return self

    def id(self, lit: Union[ClassicalLiteral, LiteralKey]) -> int:
        key = literal_key(lit) if isinstance(lit, ClassicalLiteral) else lit
        return self._ids[key]

    def get(self, lit, default=None):
        key = literal_key(lit) if isinstance(lit, ClassicalLiteral) else lit
        return self._ids.get(key, default)

    def __contains__(self, lit) -> bool:
        return self.get(lit) is not None

    def key(self, i: int) -> LiteralKey:
        return self._keys[i]

    def lookup(self, i: int) -> ClassicalLiteral:
        return key_literal(self._keys[i])

    def complement_id(self, i: int) -> int:
        return self._complement[i]

    def __len__(self) -> int:
        return len(self._keys)

    def format(self, i: int) -> str:
        return format_key(self._keys[i])

    def sort_key(self, i: int) -> tuple:
        return key_sort(self._keys[i])
