"""Cycle census of generated programs as the negation probability varies.

For each negation level, generates programs and reports how many contain
NECs, NOCs, both, and an NEC/NOC overlap node, which is the case that needs
the overlap rule during cycle breaking.

    python scripts/cycle_census.py --programs 200 --atoms 10 --rules 15
"""

import argparse
import sys

from grasp.cycles import CycleBudgetExceeded, condense, survey_cycles
from grasp.generator import GenConfig, generate
from grasp.graph import build_dependency_graph


def census(program, cap):
    nec = noc = overlap = 0
    for node in condense(build_dependency_graph(program)).virtual.values():
        s = survey_cycles(node.internal, cap)
        nec += s.nec
        noc += s.noc
        overlap += bool(s.overlap)
    return nec, noc, overlap


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--programs", type=int, default=200)
    ap.add_argument("--levels", type=float, nargs="+", default=[0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0])
    ap.add_argument("--atoms", type=int, default=10)
    ap.add_argument("--rules", type=int, default=15)
    ap.add_argument("--max-body", type=int, default=3)
    ap.add_argument("--cycle-cap", type=int, default=100_000)
    args = ap.parse_args(argv)

    print(f"{'neg':>5} {'with NEC':>9} {'with NOC':>9} {'both':>6} {'overlap':>8} {'capped':>7}")
    for neg in args.levels:
        with_nec = with_noc = both = overlap = capped = 0
        for seed in range(args.programs):
            cfg = GenConfig(num_atoms=args.atoms, num_rules=args.rules,
                            max_body_len=args.max_body, negation_prob=neg, seed=seed)
            try:
                nec, noc, ov = census(generate(cfg), args.cycle_cap)
            except CycleBudgetExceeded:
                capped += 1
                continue
            with_nec += nec > 0
            with_noc += noc > 0
            both += nec > 0 and noc > 0
            overlap += ov > 0
        print(f"{neg:>5.2f} {with_nec:>9} {with_noc:>9} {both:>6} {overlap:>8} {capped:>7}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
