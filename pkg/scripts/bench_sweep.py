"""Benchmark rounds over a sweep of generated program sizes.

Runs ``grasp bench`` once per rule count and writes one CSV per size to
--outdir, then prints a combined summary table (rules, NEC, NOC, mean and
max solve time per program).

    python scripts/bench_sweep.py --rules 40 60 80 --atoms 50 --outdir bench_out
"""

import argparse
import csv
import sys
from pathlib import Path

from grasp.cli import main as grasp


def summarise(path: Path):
    lines = [line for line in path.read_text().splitlines() if not line.startswith("#")]
    rows = list(csv.DictReader(lines))
    programs = sum(int(r["programs"]) for r in rows)
    return {
        "rules": sum(int(r["rules"]) for r in rows) // programs,
        "nec": sum(int(r["nec"]) for r in rows) / programs,
        "noc": sum(int(r["noc"]) for r in rows) / programs,
        "capped": sum(int(r["census_capped"]) for r in rows),
        "mean_s": sum(float(r["solve_time"]) for r in rows) / programs,
        "max_s": max(float(r["max_solve_time"]) for r in rows),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rules", type=int, nargs="+", default=[20, 40, 60, 80])
    ap.add_argument("--atoms", type=int, default=50)
    ap.add_argument("--neg", type=float, default=0.5)
    ap.add_argument("--max-body", type=int, default=2)
    ap.add_argument("--rounds", type=int, default=5)
    ap.add_argument("--programs", type=int, default=100)
    ap.add_argument("--outdir", type=Path, default=Path("bench_out"))
    args = ap.parse_args(argv)

    args.outdir.mkdir(parents=True, exist_ok=True)
    print(f"{'rules':>6} {'NEC/prog':>10} {'NOC/prog':>10} {'capped':>7} {'mean s':>9} {'max s':>8}")
    for rules in args.rules:
        out = args.outdir / f"bench_r{rules}.csv"
        code = grasp(["bench", "--atoms", str(args.atoms), "--rules", str(rules),
                      "--neg", str(args.neg), "--max-body", str(args.max_body),
                      "--rounds", str(args.rounds), "--programs", str(args.programs),
                      "--out", str(out)])
        if code != 0:
            return code
        s = summarise(out)
        print(f"{s['rules']:>6} {s['nec']:>10.1f} {s['noc']:>10.1f} {s['capped']:>7} "
              f"{s['mean_s']:>9.4f} {s['max_s']:>8.3f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
