"""Command line entry point: ``grasp <subcommand> ...``.

Exit codes: 0 on success (an UNSATISFIABLE result is a success), 1 on usage
or parse errors, 2 when a check fails or a resource cap is hit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

from . import __version__
from .cycles import DEFAULT_CYCLE_CAP, CycleBudgetExceeded, condense, survey_cycles
from .generator import GenConfig, generate, render, stats
from .graph import NodeKind, build_cnr_graph, build_dependency_graph, to_dot
from .justification import JustificationError, justify, justify_absence
from .oracle import DEFAULT_MAX_ATOMS, TooManyAtoms, enumerate_answer_sets_bruteforce
from .parser import ParseError, parse_program
from .program import AnswerSet, Program
from .solver import Solver

EXIT_OK, EXIT_USAGE, EXIT_CHECK = 0, 1, 2


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _read_program(path: str) -> Program:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from exc
    try:
        return parse_program(text)
    except ParseError as exc:
        name = "<stdin>" if path == "-" else path
        raise UsageError(f"{name}:{exc.line}:{exc.col}: {exc.message}") from exc


def _write(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _format_models(models: Sequence[AnswerSet]) -> str:
    if not models:
        return "UNSATISFIABLE\n"
    return "".join(f"{m}\n" for m in models)


def _solver(args, program: Program) -> Solver:
    return Solver(program, verify=not getattr(args, "no_verify", False),
                  constraint_prune=getattr(args, "constraint_prune", False),
                  cycle_cap=args.cycle_cap)


# subcommands

def cmd_solve(args) -> int:
    program = _read_program(args.file)
    solver = _solver(args, program)
    models = solver.solve(args.max_models)
    if args.format == "json":
        doc = {"result": "SATISFIABLE" if models else "UNSATISFIABLE",
               "models": [list(m.atoms) for m in models]}
        if args.stats:
            doc["stats"] = solver.stats.as_dict()
        sys.stdout.write(json.dumps(doc, sort_keys=True) + "\n")
        return EXIT_OK
    sys.stdout.write(_format_models(models))
    if args.stats:
        for key, value in solver.stats.as_dict().items():
            sys.stdout.write(f"% {key}: {value}\n")
    return EXIT_OK


def cmd_justify(args) -> int:
    program = _read_program(args.file)
    solver = _solver(args, program)
    found = solver.models()
    if not 1 <= args.model <= len(found):
        raise UsageError(f"--model {args.model} out of range: the program has {len(found)} answer set(s)")
    answer, world = found[args.model - 1]
    try:
        if args.atom in answer.atoms:
            jg = justify(solver.graph, world, args.atom)
        else:
            jg = justify_absence(solver.graph, world, args.atom)
    except JustificationError as exc:
        raise UsageError(str(exc)) from exc
    if args.format == "json":
        sys.stdout.write(jg.to_json_text())
    elif args.format == "dot":
        sys.stdout.write(jg.to_dot())
    else:
        sys.stdout.write(f"% answer set {args.model}: {answer}\n")
        sys.stdout.write(jg.to_text())
    return EXIT_OK


def cmd_oracle(args) -> int:
    program = _read_program(args.file)
    sys.stdout.write(_format_models(enumerate_answer_sets_bruteforce(program, args.max_atoms)))
    return EXIT_OK


def cmd_check(args) -> int:
    program = _read_program(args.file)
    expected = set(enumerate_answer_sets_bruteforce(program, args.max_atoms))
    got = set(_solver(args, program).solve())
    if expected == got:
        sys.stdout.write(f"OK {len(got)} answer set(s)\n")
        return EXIT_OK
    sys.stdout.write("MISMATCH\n")
    for m in sorted(got - expected):
        sys.stdout.write(f"solver only: {m}\n")
    for m in sorted(expected - got):
        sys.stdout.write(f"oracle only: {m}\n")
    return EXIT_CHECK


def _node_name(graph, n: int) -> str:
    label = graph.label(n)
    return label if graph.kind(n) is NodeKind.LITERAL else f"[{label}]"


def cmd_cycles(args) -> int:
    program = _read_program(args.file)
    graph = build_dependency_graph(program)
    cond = condense(graph)
    totals = {"positive": 0, "nec": 0, "noc": 0}
    lines = []
    for i, unit in enumerate(sorted(cond.virtual, key=lambda u: cond.members(u)), 1):
        node = cond.virtual[unit]
        counts = survey_cycles(node.internal, args.cycle_cap).counts()
        for k in totals:
            totals[k] += counts[k]
        names = ", ".join(_node_name(graph, n) for n in node.members)
        lines.append(f"component {i}: {len(node.members)} node(s) positive={counts['positive']} "
                     f"nec={counts['nec']} noc={counts['noc']} members: {names}\n")
    lines.append(f"total: components={len(cond.virtual)} positive={totals['positive']} "
                 f"nec={totals['nec']} noc={totals['noc']}\n")
    sys.stdout.write("".join(lines))
    return EXIT_OK


def cmd_graph(args) -> int:
    program = _read_program(args.file)
    graph = build_cnr_graph(program) if args.cnr else build_dependency_graph(program)
    _write(to_dot(graph, name="cnr" if args.cnr else "dg"), args.out)
    return EXIT_OK


def _config_from(args, seed: Optional[int] = None) -> GenConfig:
    try:
        return GenConfig(num_atoms=args.atoms, num_rules=args.rules, max_body_len=args.max_body,
                         negation_prob=args.neg, constraint_prob=args.constraint_prob,
                         fact_fraction=args.fact_fraction,
                         seed=args.seed if seed is None else seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_gen(args) -> int:
    config = _config_from(args)
    _write(render(generate(config), config), args.out)
    return EXIT_OK


@dataclass
class _BenchRow:
    rules: int
    nec: Optional[int]          # None when the cycle census hit the cap
    noc: Optional[int]
    solve_time: float
    oracle_time: Optional[float]
    mismatch: bool


def _bench_one(config: GenConfig, cycle_cap: Optional[int], oracle_atoms: int) -> _BenchRow:
    program = generate(config)
    try:
        report = stats(program, cycle_cap)
        nec, noc = report.nec, report.noc
    except CycleBudgetExceeded:
        nec = noc = None
    start = time.perf_counter()
    models = Solver(program, cycle_cap=cycle_cap).solve()
    solve_time = time.perf_counter() - start
    oracle_time, mismatch = None, False
    if len(program.atoms) <= oracle_atoms:
        start = time.perf_counter()
        expected = enumerate_answer_sets_bruteforce(program, oracle_atoms)
        oracle_time = time.perf_counter() - start
        mismatch = expected != models
    return _BenchRow(len(program.rules), nec, noc, solve_time, oracle_time, mismatch)


BENCH_COLUMNS = ["round", "programs", "rules", "nec", "noc", "census_capped", "solve_time",
                 "max_solve_time", "oracle_time", "mismatches"]


def cmd_bench(args) -> int:
    base = _config_from(args)
    buf = io.StringIO()
    buf.write(f"# grasp {__version__} bench\n")
    for key, value in asdict(base).items():
        buf.write(f"# {key}={value}\n")
    buf.write(f"# rounds={args.rounds} programs={args.programs} cycle_cap={args.cycle_cap}\n")
    buf.write("# seed of program i in round r: seed + r * programs + i\n")
    buf.write("# nec/noc sum the programs whose cycle census stayed under cycle_cap;"
              " census_capped counts the rest\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(BENCH_COLUMNS)
    failed = False
    pool = ProcessPoolExecutor(args.jobs) if args.jobs > 1 else None
    try:
        for r in range(args.rounds):
            configs = [_config_from(args, seed=args.seed + r * args.programs + i)
                       for i in range(args.programs)]
            jobs = [(c, args.cycle_cap, args.oracle_atoms) for c in configs]
            if pool is None:
                rows = [_bench_one(*job) for job in jobs]
            else:
                rows = list(pool.map(_bench_one, *zip(*jobs)))
            mismatches = sum(row.mismatch for row in rows)
            failed = failed or mismatches > 0
            oracle = [row.oracle_time for row in rows if row.oracle_time is not None]

            def fmt(t):
                return "" if not args.timings else f"{t:.6f}"

            writer.writerow([
                r + 1, len(rows), sum(row.rules for row in rows),
                sum(row.nec for row in rows if row.nec is not None),
                sum(row.noc for row in rows if row.noc is not None),
                sum(row.nec is None for row in rows),
                fmt(sum(row.solve_time for row in rows)),
                fmt(max(row.solve_time for row in rows)),
                fmt(sum(oracle)) if len(oracle) == len(rows) else "",
                mismatches if len(oracle) == len(rows) else "",
            ])
    finally:
        if pool is not None:
            pool.shutdown()
    _write(buf.getvalue(), args.out)
    return EXIT_CHECK if failed else EXIT_OK


# argument parsing

def _add_file(p):
    p.add_argument("file", help="program file, or - for stdin")


def _add_solver_flags(p):
    p.add_argument("--no-verify", action="store_true",
                   help="skip the stability check on candidate models")
    p.add_argument("--constraint-prune", action="store_true",
                   help="drop worlds as soon as a constraint node would become true")
    _add_cap(p)


def _add_cap(p):
    p.add_argument("--cycle-cap", type=int, default=DEFAULT_CYCLE_CAP,
                   help="maximum number of cycles enumerated per component (default %(default)s)")


def _add_gen_flags(p, atoms, rules, neg, max_body=3):
    p.add_argument("--atoms", type=int, default=atoms)
    p.add_argument("--rules", type=int, default=rules)
    p.add_argument("--neg", type=float, default=neg, help="probability that a body literal is negated")
    p.add_argument("--max-body", type=int, default=max_body)
    p.add_argument("--constraint-prob", type=float, default=0.1)
    p.add_argument("--fact-fraction", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="grasp", description="Graph-based answer set solver.")
    parser.add_argument("--version", action="version", version=f"grasp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    p = sub.add_parser("solve", help="print all answer sets")
    _add_file(p)
    p.add_argument("--max-models", type=int, default=None)
    p.add_argument("--stats", action="store_true")
    p.add_argument("--format", choices=["text", "json"], default="text")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("justify", help="explain why an atom is (not) in an answer set")
    _add_file(p)
    p.add_argument("--model", type=int, required=True, help="1-based index into the solve output")
    p.add_argument("--atom", required=True)
    p.add_argument("--format", choices=["text", "json", "dot"], default="text")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_justify)

    for name, func, text in (("oracle", cmd_oracle, "brute-force answer sets"),
                             ("check", cmd_check, "compare solver and brute force")):
        p = sub.add_parser(name, help=text)
        _add_file(p)
        p.add_argument("--max-atoms", type=int, default=DEFAULT_MAX_ATOMS)
        if name == "check":
            _add_solver_flags(p)
        p.set_defaults(func=func)

    p = sub.add_parser("cycles", help="cycle counts per strongly connected component")
    _add_file(p)
    _add_cap(p)
    p.set_defaults(func=cmd_cycles)

    p = sub.add_parser("graph", help="dependency graph in DOT")
    _add_file(p)
    p.add_argument("--cnr", action="store_true", help="show signs before conjunction flipping")
    p.add_argument("--out")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("gen", help="generate a random program")
    _add_gen_flags(p, atoms=10, rules=15, neg=0.5)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="timing rounds over generated programs, as CSV")
    _add_gen_flags(p, atoms=50, rules=80, neg=0.5, max_body=2)
    p.add_argument("--rounds", type=int, default=5)
    p.add_argument("--programs", type=int, default=100, help="programs per round")
    p.add_argument("--oracle-atoms", type=int, default=DEFAULT_MAX_ATOMS,
                   help="run the brute-force oracle when a program has at most this many atoms")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-timings", dest="timings", action="store_false",
                   help="leave timing columns empty so output is reproducible")
    _add_cap(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"grasp: error: {exc}\n")
        return EXIT_USAGE
    except CycleBudgetExceeded as exc:
        sys.stderr.write(f"grasp: {exc} (raise --cycle-cap to allow more)\n")
        return EXIT_CHECK
    except TooManyAtoms as exc:
        sys.stderr.write(f"grasp: {exc}\n")
        return EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
