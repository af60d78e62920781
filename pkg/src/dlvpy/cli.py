"""Command line front end.

    dlvpy [options] file...            solve the concatenated files
    dlvpy gen-<kind> [args]            print a generated instance

Exit status: 0 models found or query answered, 1 no models, 2 usage,
parse or grounding error.
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional

from .analyzer import EvalClass
from .checker import CheckResult
from .grounder import GroundingError, serialize_ground
from .parser import ParseError, parse_program
from .reasoner import (
    SolveConfig, _Pipeline, brave, cautious, check_model, format_model, solve,
)

EXIT_OK, EXIT_NONE, EXIT_ERROR = 0, 1, 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _solver_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="dlvpy", description="Disjunctive datalog solver.")
    ap.add_argument("files", nargs="*", help="program files, '-' for stdin")
    ap.add_argument("-n", dest="n", default="all", help="number of models (K or all)")
    ap.add_argument("-N", dest="maxint", type=int, default=None, help="maxint")
    ap.add_argument("-brave", dest="brave", metavar="LITERAL")
    ap.add_argument("-cautious", dest="cautious", metavar="LITERAL")
    ap.add_argument("-check", dest="check", metavar="MODELFILE")
    ap.add_argument("--instantiate", action="store_true", help="print the ground program")
    ap.add_argument("--classify", action="store_true", help="print the fragment class")
    ap.add_argument("--stats", action="store_true", help="print a statistics line")
    ap.add_argument("--filter", default=None, help="comma separated predicates to print")
    ap.add_argument("--force-class", choices=[c.value for c in EvalClass], default=None)
    ap.add_argument("--naive", action="store_true", help="use the textbook instantiation")
    return ap


def _read(files) -> str:
    parts = []
    for f in files:
        if f == "-":
            parts.append(sys.stdin.read())
        else:
            with open(f, encoding="utf-8") as fh:
                parts.append(fh.read())
    return "\n".join(parts)


def _split_literals(text: str) -> list:
    """Split ``{a, p(b,c), -d}`` (braces and trailing dots optional)."""
    text = text.strip().strip("{}").replace("}", " ").replace("{", " ")
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in ",\n":
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return [s.strip().rstrip(".").strip() for s in out if s.strip().rstrip(".").strip()]


def read_model(text: str) -> list:
    lits = []
    for s in _split_literals(text):
        prog = parse_program(s + ".")
        if len(prog.rules) != 1 or not prog.rules[0].is_fact or len(prog.rules[0].head) != 1:
            raise ValueError(f"not a ground literal: {s!r}")
        lits.append(prog.rules[0].head[0])
    return lits


def _filter(arg: Optional[str]):
    if not arg:
        return None
    return {s.strip() for s in arg.split(",") if s.strip()}


def _print_stats(stats: dict, out):
    out.write("% stats: " + " ".join(f"{k}={v}" for k, v in stats.items()) + "\n")


def run(argv: list, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    if argv and argv[0].startswith("gen-"):
        return _generate(argv, out, err)
    try:
        a = _solver_parser().parse_args(argv)
        if a.n != "all" and (not a.n.isdigit() or int(a.n) < 1):
            raise _UsageError(f"-n expects a positive integer or 'all', got {a.n!r}")
        if not a.files:
            raise _UsageError("no input files")
        if sum(bool(x) for x in (a.brave, a.cautious, a.check)) > 1:
            raise _UsageError("-brave, -cautious and -check are exclusive")
        p = parse_program(_read(a.files))
    except _UsageError as e:
        err.write(f"dlvpy: {e}\n")
        return EXIT_ERROR
    except OSError as e:
        err.write(f"dlvpy: {e}\n")
        return EXIT_ERROR
    except ParseError as e:
        err.write(f"dlvpy: parse error\n{e}\n")
        return EXIT_ERROR

    cfg = SolveConfig(maxint=a.maxint, limit=None if a.n == "all" else int(a.n),
                      force_class=EvalClass(a.force_class) if a.force_class else None,
                      intelligent=not a.naive)
    only = _filter(a.filter)
    try:
        if a.classify:
            from .analyzer import classify
            for line in classify(p).lines():
                out.write(line + "\n")
            return EXIT_OK
        if a.instantiate:
            pipe = _Pipeline(p, cfg)
            out.write(serialize_ground(pipe.g))
            if a.stats:
                _print_stats(pipe.stats(), out)
            return EXIT_OK
        if a.brave or a.cautious:
            fn, q = (brave, a.brave) if a.brave else (cautious, a.cautious)
            ans, m = fn(p, q, cfg)
            out.write(("true" if ans else "false") + "\n")
            if m is not None:
                out.write(format_model(m, only) + "\n")
            return EXIT_OK
        if a.check:
            with open(a.check, encoding="utf-8") as fh:
                model = read_model(fh.read())
            res: CheckResult = check_model(p, model, cfg)
            out.write("answer set\n" if res.ok else f"not an answer set: {res.reason}\n")
            return EXIT_OK if res.ok else EXIT_NONE
        res = solve(p, cfg)
    except (GroundingError, ValueError, OSError) as e:
        err.write(f"dlvpy: {e}\n")
        return EXIT_ERROR

    for m in res.models:
        out.write(format_model(m, only) + "\n")
        if res.cost is not None and res.ground.weak_constraints:
            out.write(res.cost.format() + "\n")
    if a.stats:
        _print_stats(res.stats, out)
    return EXIT_OK if res.models else EXIT_NONE


# -- instance generators ------------------------------------------------------------

def _generate(argv, out, err) -> int:
    from .corpus import encoding
    from .corpus import generators as G

    ap = _Parser(prog="dlvpy")
    sub = ap.add_subparsers(dest="kind", required=True)
    r = sub.add_parser("gen-ramsey")
    r.add_argument("k", type=int)
    r.add_argument("m", type=int)
    r.add_argument("n", type=int)
    q = sub.add_parser("gen-2qbf")
    q.add_argument("--x", type=int, default=3)
    q.add_argument("--y", type=int, default=3)
    q.add_argument("--terms", type=int, default=4)
    q.add_argument("--seed", type=int, default=0)
    s = sub.add_parser("gen-stratcomp")
    s.add_argument("n", type=int)
    s.add_argument("--seed", type=int, default=0)
    for kind in ("hampath", "tsp"):
        gp = sub.add_parser(f"gen-{kind}")
        gp.add_argument("n", type=int)
        gp.add_argument("--density", type=float, default=0.5)
        gp.add_argument("--seed", type=int, default=0)
    for gp in sub.choices.values():
        gp.add_argument("--with-program", action="store_true",
                        help="prepend the matching encoding")
    try:
        a = ap.parse_args(argv)
        if a.kind == "gen-ramsey":
            text, prog = G.gen_ramsey(a.k, a.m, a.n), ""
        elif a.kind == "gen-2qbf":
            text, prog = G.random_qbf(a.x, a.y, a.terms, a.seed).facts(), "qbf2"
        elif a.kind == "gen-stratcomp":
            text, prog = G.gen_stratcomp(a.n, a.seed).facts(), "strat4"
        else:
            kind = a.kind[4:]
            text, prog = G.gen_graph(kind, a.n, a.density, a.seed).facts(), kind
    except (_UsageError, ValueError) as e:
        err.write(f"dlvpy: {e}\n")
        return EXIT_ERROR
    if a.with_program and prog:
        out.write(encoding(prog))
    out.write(text)
    return EXIT_OK


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
