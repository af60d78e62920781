"""End-to-end solving: classify, ground, generate, check, optimize.

Answer sets leave this module as frozensets of literal keys
``(negated, predicate, args)`` so callers never depend on grounding ids.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from .analyzer import EvalClass, FragmentClass, classify
from .checker import Checker
from .core import ClassicalLiteral, Program, format_key, is_ground, key_sort, literal_key
from .generator import GeneratorConfig, ModelGenerator
from .grounder import DEFAULT_LIMIT, GroundProgram, intelligent_ground, naive_ground
from .optimizer import CostVector, cost, solve_optimal
from .parser import ParseError, parse_program


@dataclass
class SolveConfig:
    maxint: Optional[int] = None
    limit: Optional[int] = None  # max number of models, None = all
    force_class: Optional[EvalClass] = None
    intelligent: bool = True
    grounding_limit: int = DEFAULT_LIMIT
    generator: GeneratorConfig = field(default_factory=GeneratorConfig)


@dataclass
class SolveResult:
    models: list  # frozensets of literal keys
    cost: Optional[CostVector]
    fragment: FragmentClass
    ground: GroundProgram
    stats: dict = field(default_factory=dict)

    @property
    def satisfiable(self) -> bool:
        return bool(self.models)


def _check_method(cls: EvalClass, forced: Optional[EvalClass]) -> str:
    if cls in (EvalClass.L4, EvalClass.L5):
        return "auto"
    if forced in (EvalClass.L4, EvalClass.L5):
        return "general"
    return "hcf"


def _to_keys(g: GroundProgram, m) -> frozenset:
    return frozenset(g.index.key(i) for i in m)


class _Pipeline:
    def __init__(self, p: Program, config: SolveConfig):
        self.p = p
        self.config = config
        self.fragment = classify(p)
        self.cls = config.force_class or self.fragment.cls
        if config.intelligent:
            self.g = intelligent_ground(p, config.maxint, limit=config.grounding_limit)
        else:
            self.g = naive_ground(p, maxint=config.maxint, limit=config.grounding_limit)
        self.checker = Checker(self.g)
        self.method = _check_method(self.fragment.cls, config.force_class)
        self.generators: list = []

    def make_generator(self) -> ModelGenerator:
        mg = ModelGenerator(self.g, self.config.generator)
        self.generators.append(mg)
        return mg

    def accept(self, m) -> bool:
        return self.checker.is_answer_set(m, self.method, witness=False).ok

    def grounder_only(self) -> bool:
        return self.cls is EvalClass.L1 and not self.g.rules

    def stream(self) -> Iterator[frozenset]:
        """Answer sets of the rules (weak constraints ignored)."""
        if self.g.inconsistent:
            return
        if self.grounder_only():
            yield frozenset(self.g.certain)
            return
        for m in self.make_generator().models():
            if self.accept(m):
                yield m

    def stats(self) -> dict:
        s = {"class": self.cls.value, "ground_rules": len(self.g.rules),
             "ground_weak": len(self.g.weak_constraints), "certain": len(self.g.certain),
             "choices": 0, "backtracks": 0, "candidates": 0,
             "checks": self.checker.stats.calls,
             "check_searches": self.checker.stats.searches}
        for mg in self.generators:
            s["choices"] += mg.stats.choices
            s["backtracks"] += mg.stats.backtracks
            s["candidates"] += mg.stats.candidates
        return s


def solve(p: Program, config: SolveConfig | None = None) -> SolveResult:
    config = config or SolveConfig()
    pipe = _Pipeline(p, config)
    g = pipe.g
    if pipe.g.weak_constraints and not g.inconsistent:
        if pipe.grounder_only():
            models = [frozenset(g.certain)]
            best = cost(g.weak_constraints, models[0])
        else:
            res = solve_optimal(g, pipe.make_generator, pipe.accept, config.limit)
            models, best = res.models, res.cost
    else:
        models = []
        for m in pipe.stream():
            models.append(m)
            if config.limit is not None and len(models) >= config.limit:
                break
        best = cost(g.weak_constraints, models[0]) if models else None
    return SolveResult([_to_keys(g, m) for m in models], best, pipe.fragment, g, pipe.stats())


def answer_sets(p: Program | str, maxint: Optional[int] = None, **kw) -> list:
    if isinstance(p, str):
        p = parse_program(p)
    return solve(p, SolveConfig(maxint=maxint, **kw)).models


def _query_key(query) -> tuple:
    if isinstance(query, str):
        try:
            prog = parse_program(query.strip().rstrip(".") + ".")
        except ParseError as e:
            raise ValueError(f"bad query {query!r}: {e}") from None
        if len(prog.rules) != 1 or not prog.rules[0].is_fact or len(prog.rules[0].head) != 1:
            raise ValueError(f"query must be a single classical literal: {query!r}")
        query = prog.rules[0].head[0]
    if isinstance(query, ClassicalLiteral):
        if not is_ground(query):
            raise ValueError(f"query literal {query} is not ground")
        return literal_key(query)
    return query


def brave(p: Program, query, config: SolveConfig | None = None
          ) -> tuple[bool, Optional[frozenset]]:
    """True iff some (optimal) answer set contains ``query``; returns a witness."""
    key = _query_key(query)
    config = config or SolveConfig()
    if p.weak_constraints:
        for m in solve(p, SolveConfig(**{**config.__dict__, "limit": None})).models:
            if key in m:
                return True, m
        return False, None
    pipe = _Pipeline(p, config)
    for m in pipe.stream():
        keys = _to_keys(pipe.g, m)
        if key in keys:
            return True, keys
    return False, None


def cautious(p: Program, query, config: SolveConfig | None = None
             ) -> tuple[bool, Optional[frozenset]]:
    """True iff every (optimal) answer set contains ``query``; vacuously true
    without answer sets.  Returns a counterexample when false."""
    key = _query_key(query)
    config = config or SolveConfig()
    if p.weak_constraints:
        for m in solve(p, SolveConfig(**{**config.__dict__, "limit": None})).models:
            if key not in m:
                return False, m
        return True, None
    pipe = _Pipeline(p, config)
    for m in pipe.stream():
        keys = _to_keys(pipe.g, m)
        if key not in keys:
            return False, keys
    return True, None


def format_model(m, only: Optional[set] = None) -> str:
    keys = sorted((k for k in m if only is None or k[1] in only), key=key_sort)
    return "{" + ", ".join(format_key(k) for k in keys) + "}"


def models_as_strings(models) -> set:
    """Answer sets as frozensets of printed literals (handy in tests)."""
    return {frozenset(format_key(k) for k in m) for m in models}


def check_model(p: Program, model, config: SolveConfig | None = None):
    """Is ``model`` (literal keys, or ClassicalLiterals) an answer set of ``p``?
    Weak constraints are ignored.  Returns a CheckResult."""
    from .checker import CheckResult

    config = config or SolveConfig()
    pipe = _Pipeline(p, config)
    g = pipe.g
    keys = {literal_key(l) if isinstance(l, ClassicalLiteral) else l for l in model}
    for k in sorted(keys, key=key_sort):
        if (not k[0], k[1], k[2]) in keys:
            return CheckResult(False, None, f"inconsistent: {format_key(k)}")
    ids = set()
    heads = g.head_ids()
    for k in sorted(keys, key=key_sort):
        i = g.index.get(k)
        if i is None or i not in heads:
            return CheckResult(False, None, f"{format_key(k)} cannot be derived")
        ids.add(i)
    missing = g.certain - ids
    if missing:
        return CheckResult(False, None, "missing " + g.index.format(min(missing)))
    return pipe.checker.is_answer_set(ids, pipe.method)
