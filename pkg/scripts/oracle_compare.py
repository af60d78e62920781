"""Differential run of the solver against the brute-force oracle on random programs.

    python3 scripts/oracle_compare.py [-n 500] [--seed 0] [--show]
"""
import argparse
import collections
import time

from dlvpy.corpus.randprog import random_batch
from dlvpy.oracle import oracle_answer_sets
from dlvpy.reasoner import solve


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-n", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--show", action="store_true", help="print discrepant programs")
    a = ap.parse_args()

    t0 = time.perf_counter()
    per_class = collections.Counter()
    bad = 0
    for cls, text, p in random_batch(a.n, seed=a.seed):
        per_class[cls.value] += 1
        if set(solve(p).models) != oracle_answer_sets(p):
            bad += 1
            if a.show:
                print(f"--- {cls.value}\n{text}")
    print(" ".join(f"{k}={v}" for k, v in sorted(per_class.items())))
    print(f"{a.n} programs, {bad} discrepancies, {time.perf_counter() - t0:.1f}s")
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
