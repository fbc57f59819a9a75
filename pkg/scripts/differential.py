"""Compare the graph solver with the brute-force oracle on random programs.

    python scripts/differential.py --per-level 200 --atoms 10 --rules 15

Prints one line per negation level and every mismatching seed. Exits 1 if
any program disagrees.
"""

import argparse
import sys
import time

from grasp.generator import GenConfig, generate
from grasp.oracle import enumerate_answer_sets_bruteforce
from grasp.solver import Solver


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--per-level", type=int, default=125, help="programs per negation level")
    ap.add_argument("--levels", type=float, nargs="+", default=[0.0, 0.3, 0.6, 0.9])
    ap.add_argument("--atoms", type=int, default=10)
    ap.add_argument("--rules", type=int, default=15)
    ap.add_argument("--max-body", type=int, default=3)
    ap.add_argument("--constraint-prob", type=float, default=0.1)
    ap.add_argument("--seed", type=int, default=0, help="first seed")
    args = ap.parse_args(argv)

    bad = 0
    for neg in args.levels:
        start = time.perf_counter()
        rejected = worlds = models = 0
        for i in range(args.per_level):
            cfg = GenConfig(num_atoms=args.atoms, num_rules=args.rules, max_body_len=args.max_body,
                            negation_prob=neg, constraint_prob=args.constraint_prob,
                            seed=args.seed + i)
            program = generate(cfg)
            solver = Solver(program)
            got = solver.solve()
            rejected += solver.stats.rejected
            worlds += solver.stats.worlds
            models += len(got)
            if got != enumerate_answer_sets_bruteforce(program):
                bad += 1
                print(f"MISMATCH neg={neg} seed={cfg.seed}")
        print(f"neg={neg:.2f} programs={args.per_level} models={models} worlds={worlds} "
              f"rejected={rejected} time={time.perf_counter() - start:.1f}s")
    print(f"mismatches: {bad}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
