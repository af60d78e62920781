"""Timings for the generated benchmark families at a few sizes.

    python3 scripts/benchmark.py [--family all|ramsey|hampath|tsp|qbf|strat] [--seeds 5]
"""
import argparse
import statistics
import time

from dlvpy.corpus import load
from dlvpy.corpus.generators import gen_graph, gen_ramsey, gen_stratcomp, random_qbf
from dlvpy.parser import parse_program
from dlvpy.reasoner import SolveConfig, solve


def _time(p, **kw):
    t = time.perf_counter()
    res = solve(p, SolveConfig(**kw))
    return time.perf_counter() - t, res


def ramsey(seeds):
    for k, m, n in [(3, 3, 5), (3, 3, 6), (3, 4, 8), (3, 4, 9)]:
        dt, res = _time(parse_program(gen_ramsey(k, m, n)), limit=1)
        yield f"ramsey({k},{m},{n})", [dt], f"sat={res.satisfiable}"


def graphs(kind, seeds):
    enc = "hampath_open" if kind == "hampath" else "tsp"
    for n in (6, 8, 10):
        runs = [_time(load(enc, gen_graph(kind, n, 0.5, s).facts())) for s in range(seeds)]
        yield f"{kind} n={n}", [dt for dt, _ in runs], f"sat={sum(r.satisfiable for _, r in runs)}"


def qbf(seeds):
    for k in (4, 6, 8):
        runs = [_time(load("qbf2", random_qbf(k, k, 2 * k, s).facts()), limit=1)
                for s in range(seeds)]
        yield f"2qbf |X|=|Y|={k}", [dt for dt, _ in runs], f"valid={sum(r.satisfiable for _, r in runs)}"


def strat(seeds):
    for n in (10, 20, 40):
        runs = [_time(load("strat4", gen_stratcomp(n, s).facts())) for s in range(seeds)]
        yield f"stratcomp n={n}", [dt for dt, _ in runs], f"models={sum(len(r.models) for _, r in runs)}"


FAMILIES = {
    "ramsey": ramsey,
    "hampath": lambda s: graphs("hampath", s),
    "tsp": lambda s: graphs("tsp", s),
    "qbf": qbf,
    "strat": strat,
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--family", default="all", choices=["all"] + list(FAMILIES))
    ap.add_argument("--seeds", type=int, default=5)
    a = ap.parse_args()
    names = list(FAMILIES) if a.family == "all" else [a.family]
    for name in names:
        for label, times, note in FAMILIES[name](a.seeds):
            print(f"{label:<22} median {statistics.median(times):7.3f}s  max {max(times):7.3f}s  {note}",
                  flush=True)


if __name__ == "__main__":
    main()
