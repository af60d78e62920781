"""Small random propositional programs for differential testing.

Programs are drawn with a per-class bias (disjunction on or off, weak
constraints on or off) and rejected until the analyzer puts them in the
requested class, so a seeded batch covers all five classes evenly.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from ..analyzer import EvalClass, classify
from ..core import Program
from ..parser import parse_program


@dataclass
class RandConfig:
    atoms: int = 8
    max_rules: int = 12
    max_head: int = 3
    max_body: int = 3
    p_naf: float = 0.3
    p_strong: float = 0.1
    p_constraint: float = 0.15
    weights: tuple = (1, 2, 3)
    max_weak: int = 3


# (disjunctive heads allowed, weak constraints present)
_BIAS = {
    EvalClass.L1: (False, False),
    EvalClass.L2: (True, False),
    EvalClass.L3: (True, True),
    EvalClass.L4: (True, False),
    EvalClass.L5: (True, True),
}


def _lit(rng: random.Random, cfg: RandConfig) -> str:
    a = "abcdefghijklmnopqrstuvwxyz"[rng.randrange(cfg.atoms)]
    return ("-" if rng.random() < cfg.p_strong else "") + a


def _body(rng, cfg, n) -> list:
    return [("not " if rng.random() < cfg.p_naf else "") + _lit(rng, cfg) for _ in range(n)]


def random_program_text(rng: random.Random, cfg: RandConfig, disjunctive: bool,
                        weak: bool) -> str:
    lines = []
    for _ in range(rng.randint(1, cfg.max_rules)):
        if rng.random() < cfg.p_constraint:
            body = _body(rng, cfg, rng.randint(1, cfg.max_body))
            lines.append(f":- {', '.join(body)}.")
            continue
        nh = rng.randint(1, cfg.max_head) if disjunctive else 1
        head = sorted({_lit(rng, cfg) for _ in range(nh)})
        body = _body(rng, cfg, rng.randint(0, cfg.max_body))
        lines.append(" v ".join(head) + (f" :- {', '.join(body)}." if body else "."))
    if weak:
        for _ in range(rng.randint(1, cfg.max_weak)):
            body = _body(rng, cfg, rng.randint(1, cfg.max_body))
            w, l = rng.choice(cfg.weights), rng.choice(cfg.weights)
            lines.append(f":~ {', '.join(body)}. [{w}:{l}]")
    return "\n".join(lines) + "\n"


def random_program(cls: EvalClass, seed=None, cfg: RandConfig | None = None,
                   tries: int = 10000) -> tuple[str, Program]:
    cfg = cfg or RandConfig()
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    disj, weak = _BIAS[cls]
    for _ in range(tries):
        text = random_program_text(rng, cfg, disj, weak)
        p = parse_program(text)
        if classify(p).cls is cls:
            return text, p
    raise RuntimeError(f"no {cls.value} program after {tries} draws")


def random_batch(n: int, seed: int = 0, cfg: RandConfig | None = None) -> list:
    """``n`` programs cycling through L1..L5; returns (class, text, program)."""
    rng = random.Random(seed)
    classes = list(EvalClass)
    out = []
    for i in range(n):
        cls = classes[i % len(classes)]
        text, p = random_program(cls, rng, cfg)
        out.append((cls, text, p))
    return out
