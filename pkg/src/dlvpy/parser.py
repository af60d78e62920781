"""Text front end: tokenizer, recursive-descent parser, safety check, serializer.

Surface syntax::

    a v -b | c.                       % disjunction with `v` or `|`, `-` is strong negation
    reachable(X,Y) :- arc(X,U), reachable(U,Y).
    :- inPath(X,Y), inPath(X,Y1), Y <> Y1.
    :~ assign(Id,T), not ok(Id). [2:1]
    time(T) :- #int(T).               % also #succ(X,Y), +(X,Y,Z), Z = X + Y, #maxint
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Literal, Union

from .core import (
    BUILTIN_ARITY, MAXINT, Atom, ClassicalLiteral, NafLiteral, Program, Rule, Term,
    TermKind, WeakConstraint, num,
)


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: Literal["error", "warning"]
    line: int
    column: int
    message: str
    fragment: str = ""

    def __str__(self) -> str:
        frag = f" near '{self.fragment}'" if self.fragment else ""
        return f"{self.line}:{self.column}: {self.severity}: {self.message}{frag}"


class ParseError(Exception):
    def __init__(self, diagnostics: list[ParseDiagnostic]):
        self.diagnostics = diagnostics
        errors = [d for d in diagnostics if d.severity == "error"]
        super().__init__("\n".join(map(str, errors or diagnostics)))


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>%[^\n]*)
  | (?P<string>"[^"\n]*")
  | (?P<int>[0-9]+)
  | (?P<var>[A-Z][A-Za-z0-9_']*)
  | (?P<ident>[a-z][A-Za-z0-9_']*)
  | (?P<anon>_(?![A-Za-z0-9_']))
  | (?P<hash>\#[a-z]+)
  | (?P<op>:-|:~|<>|!=|<=|>=|==|[=<>()\[\],.:|+*\-¬])
""", re.VERBOSE)


@dataclass(frozen=True, slots=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


class _Fail(Exception):
    def __init__(self, tok: _Tok, message: str):
        self.tok = tok
        self.message = message


def _tokenize(text: str) -> tuple[list[_Tok], list[ParseDiagnostic]]:
    toks, diags = [], []
    pos, line, line_start = 0, 1, 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            end = pos + 1
            while end < n and not _TOKEN_RE.match(text, end):
                end += 1
            diags.append(ParseDiagnostic("error", line, pos - line_start + 1,
                                         "unexpected character(s)", text[pos:end][:20]))
            pos = end
            continue
        kind, lexeme = m.lastgroup, m.group()
        if kind not in ("ws", "comment"):
            if kind == "op" and lexeme == "¬":
                lexeme = "-"
            toks.append(_Tok(kind, lexeme, line, pos - line_start + 1))
        nl = lexeme.count("\n")
        if nl:
            line += nl
            line_start = pos + lexeme.rindex("\n") + 1
        pos = m.end()
    return toks, diags


_COMPARE_OPS = {"=": "=", "==": "=", "<": "<", ">": ">", "<=": "<=", ">=": ">=",
                "<>": "<>", "!=": "<>"}


class _Parser:
    def __init__(self, toks: list[_Tok], last_pos: tuple[int, int]):
        self.toks = toks
        self.i = 0
        self.last_pos = last_pos
        self.anon = 0

    # -- token helpers --------------------------------------------------
    def peek(self, k: int = 0) -> _Tok | None:
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def at(self, text: str, k: int = 0) -> bool:
        t = self.peek(k)
        return t is not None and t.kind in ("op", "hash", "ident") and t.text == text

    def eof_tok(self) -> _Tok:
        line, col = self.last_pos
        return _Tok("eof", "", line, col)

    def next(self) -> _Tok:
        t = self.peek()
        if t is None:
            raise _Fail(self.eof_tok(), "unexpected end of input")
        self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        t = self.peek()
        if t is None or t.text != text or t.kind not in ("op", "hash", "ident"):
            raise _Fail(t or self.eof_tok(), f"expected '{text}'")
        self.i += 1
        return t

    # -- grammar --------------------------------------------------------
    def statement(self):
        self.anon = 0
        if self.at(":-"):
            self.next()
            body = self.body()
            self.expect(".")
            return Rule((), body)
        if self.at(":~"):
            self.next()
            body = self.body()
            self.expect(".")
            weight, level = self.weight_spec()
            return WeakConstraint(body, weight, level)
        if self.at("#maxint") and self.at("=", 1):
            self.next()
            self.next()
            t = self.next()
            if t.kind != "int":
                raise _Fail(t, "expected an integer after '#maxint ='")
            self.expect(".")
            return int(t.text)
        head = [self.head_literal()]
        while self.at("v") or self.at("|"):
            self.next()
            head.append(self.head_literal())
        body = ()
        if self.at(":-"):
            self.next()
            body = self.body()
        self.expect(".")
        return Rule(tuple(head), body)

    def weight_spec(self) -> tuple[Term, Term]:
        one = num(1)
        if not self.at("["):
            return one, one
        self.next()
        weight = level = one
        if not self.at(":") and not self.at("]"):
            weight = self.weight_term()
        if self.at(":"):
            self.next()
            if not self.at("]"):
                level = self.weight_term()
        self.expect("]")
        return weight, level

    def weight_term(self) -> Term:
        t = self.next()
        if t.kind == "int":
            if int(t.text) <= 0:
                raise _Fail(t, "weights and levels must be positive")
            return num(int(t.text))
        if t.kind == "var":
            return Term(TermKind.VARIABLE, t.text)
        raise _Fail(t, "weight/level must be a positive integer or a variable")

    def head_literal(self) -> ClassicalLiteral:
        negated = False
        if self.at("-"):
            self.next()
            negated = True
        t = self.peek()
        if t is None or t.kind != "ident":
            raise _Fail(t or self.eof_tok(), "expected a head atom")
        return ClassicalLiteral(self.atom(), negated)

    def atom(self) -> Atom:
        name = self.next().text
        args: tuple[Term, ...] = ()
        if self.at("("):
            self.next()
            args = self.terms()
            self.expect(")")
        return Atom(name, args)

    def terms(self) -> tuple[Term, ...]:
        out = [self.term()]
        while self.at(","):
            self.next()
            out.append(self.term())
        return tuple(out)

    def term(self) -> Term:
        t = self.next()
        if t.kind == "var":
            return Term(TermKind.VARIABLE, t.text)
        if t.kind == "ident":
            return Term(TermKind.SYMBOL, t.text)
        if t.kind == "int":
            return num(int(t.text))
        if t.kind == "string":
            return Term(TermKind.STRING, t.text[1:-1])
        if t.kind == "anon":
            self.anon += 1
            return Term(TermKind.ANONYMOUS, f"_{self.anon}")
        if t.kind == "hash" and t.text == "#maxint":
            return MAXINT
        raise _Fail(t, "expected a term")

    def body(self) -> tuple[NafLiteral, ...]:
        out = [self.body_literal()]
        while self.at(","):
            self.next()
            out.append(self.body_literal())
        return tuple(out)

    def body_literal(self) -> NafLiteral:
        naf = False
        start = self.peek()
        if self.at("not"):
            self.next()
            naf = True
        t = self.peek()
        if t is None:
            raise _Fail(self.eof_tok(), "expected a body literal")
        if t.kind == "hash" and t.text in ("#int", "#succ"):
            lit = self.prefix_builtin()
        elif t.kind == "op" and t.text in ("+", "*") and self.at("(", 1):
            lit = self.prefix_builtin()
        elif self.at("-"):
            self.next()
            if (self.peek() or self.eof_tok()).kind != "ident":
                raise _Fail(self.peek() or self.eof_tok(), "expected an atom after '-'")
            return NafLiteral(ClassicalLiteral(self.atom(), True), naf)
        elif t.kind == "ident" and not (self.peek(1) and self.peek(1).text in _COMPARE_OPS):
            return NafLiteral(ClassicalLiteral(self.atom(), False), naf)
        else:
            lit = self.comparison()
        if naf:
            raise _Fail(start, "built-in literals cannot be negated with 'not'")
        return NafLiteral(lit, False)

    def prefix_builtin(self) -> ClassicalLiteral:
        t = self.next()
        self.expect("(")
        args = self.terms()
        close = self.expect(")")
        if len(args) != BUILTIN_ARITY[t.text]:
            raise _Fail(close, f"{t.text} expects {BUILTIN_ARITY[t.text]} arguments")
        return ClassicalLiteral(Atom(t.text, args))

    def comparison(self) -> ClassicalLiteral:
        left = self.term()
        op_tok = self.next()
        if op_tok.text not in _COMPARE_OPS or op_tok.kind != "op":
            raise _Fail(op_tok, "expected a comparison operator")
        op = _COMPARE_OPS[op_tok.text]
        right = self.term()
        if op == "=" and (self.at("+") or self.at("*")):
            arith = self.next().text
            operand = self.term()
            return ClassicalLiteral(Atom(arith, (right, operand, left)))
        return ClassicalLiteral(Atom(op, (left, right)))


def _last_position(text: str) -> tuple[int, int]:
    if not text:
        return (1, 1)
    body = text[:-1] if text.endswith("\n") and len(text) > 1 else text
    line = body.count("\n") + 1
    col = len(body) - (body.rfind("\n") + 1)
    return (line, max(col, 1))


def parse(text: Union[str, bytes]) -> tuple[Program | None, list[ParseDiagnostic]]:
    """Parse ``text``; returns ``(program, diagnostics)``.

    ``program`` is ``None`` whenever an error diagnostic was produced.
    """
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            prefix = bytes(text[:exc.start]).decode("utf-8", "replace")
            line = prefix.count("\n") + 1
            col = len(prefix) - (prefix.rfind("\n") + 1) + 1
            return None, [ParseDiagnostic("error", line, col, "input is not valid UTF-8")]
    toks, diags = _tokenize(text)
    p = _Parser(toks, _last_position(text))
    stmts: list[tuple[Union[Rule, WeakConstraint], _Tok]] = []
    maxint = None
    while p.peek() is not None:
        start = p.peek()
        try:
            st = p.statement()
        except _Fail as f:
            diags.append(ParseDiagnostic("error", f.tok.line, f.tok.col, f.message, f.tok.text))
            # resynchronise after the next statement terminator
            while p.peek() is not None and not p.at("."):
                p.i += 1
            if p.peek() is not None:
                p.i += 1
            continue
        if isinstance(st, int):
            maxint = st
        else:
            stmts.append((st, start))

    arities: dict[str, int] = {}
    for st, tok in stmts:
        for v in check_safety(st):
            diags.append(ParseDiagnostic("error", tok.line, tok.col,
                                         f"unsafe variable {v}", str(st)[:40]))
        for lit in _ordinary_literals(st):
            name, ar = lit.atom.predicate, lit.atom.arity
            seen = arities.setdefault(name, ar)
            if seen != ar:
                diags.append(ParseDiagnostic(
                    "warning", tok.line, tok.col,
                    f"predicate {name} used with arities {seen} and {ar}", name))
                arities[name] = ar
    if any(d.severity == "error" for d in diags):
        return None, diags
    rules = tuple(st for st, _ in stmts if isinstance(st, Rule))
    wcs = tuple(st for st, _ in stmts if isinstance(st, WeakConstraint))
    return Program(rules, wcs, maxint), diags


def parse_program(text: Union[str, bytes]) -> Program:
    """Parse or raise :class:`ParseError` carrying every diagnostic."""
    program, diags = parse(text)
    if program is None:
        raise ParseError(diags)
    return program


def _ordinary_literals(st: Union[Rule, WeakConstraint]) -> Iterable[ClassicalLiteral]:
    if isinstance(st, Rule):
        yield from st.head
    for b in st.body:
        if not b.atom.is_builtin:
            yield b.literal


def check_safety(st: Union[Rule, WeakConstraint]) -> list[str]:
    """Names of variables not bound by a positive, non-comparison body literal.

    ``#int``, ``#succ``, ``+`` and ``*`` bind; comparisons never do.
    """
    bound = set()
    for b in st.body:
        if not b.naf and not b.atom.is_comparison:
            bound.update(t for t in b.atom.args if t.is_variable)
    unsafe, seen = [], set()
    terms: list[Term] = []
    if isinstance(st, Rule):
        for h in st.head:
            terms.extend(h.atom.args)
    for b in st.body:
        terms.extend(b.atom.args)
    if isinstance(st, WeakConstraint):
        terms.extend((st.weight, st.level))
    for t in terms:
        if t.is_variable and t not in bound and t not in seen:
            seen.add(t)
            unsafe.append(str(t))
    return unsafe


def serialize(program: Program) -> str:
    """Canonical text; ``parse_program(serialize(p)) == p``."""
    lines = []
    if program.maxint is not None:
        lines.append(f"#maxint = {program.maxint}.")
    lines.extend(str(r) for r in program.rules)
    lines.extend(str(w) for w in program.weak_constraints)
    return "".join(line + "\n" for line in lines)
