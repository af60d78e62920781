"""Run the Sokoban encoding with 1, 2, ... push actions until a plan appears.

    python3 scripts/sokoban_iterate.py [--max 8] [--forward-only]
"""
import argparse
import time

from dlvpy.corpus import load
from dlvpy.corpus.sokoban import Board, plan_from_model
from dlvpy.generator import GeneratorConfig
from dlvpy.reasoner import SolveConfig, solve


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max", type=int, default=8, help="largest push count to try")
    ap.add_argument("--forward-only", action="store_true",
                    help="disable backward and support propagation")
    a = ap.parse_args()

    board = Board.parse()
    print(f"BFS minimum: {board.min_pushes()} pushes")
    gen = GeneratorConfig(backward=False, support=False) if a.forward_only else GeneratorConfig()
    p = load("sokoban", board.facts())
    t0 = time.perf_counter()
    for n in range(1, a.max + 1):
        res = solve(p, SolveConfig(maxint=n, limit=1, generator=gen))
        print(f"pushes={n} plan={'yes' if res.models else 'no'} "
              f"choices={res.stats['choices']} t={time.perf_counter() - t0:.1f}s", flush=True)
        if res.models:
            plan = plan_from_model(board, res.models[0])
            for b, d, dst in plan:
                print(f"  push box {b} {d} to {dst}")
            print("replay:", board.replay(plan)[1])
            break


if __name__ == "__main__":
    main()
