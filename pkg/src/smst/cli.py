"""Command-line front end.

Exit status: 0 solved or verified, 1 infeasible or invalid solution, 2 usage
or format error.  Machine output (``--machine``) is one ``key=value`` per line.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .bench import SOLVERS, gen_planted_sunflower, race
from .fixtures import FIXTURES
from .forest import SimForest
from .hardness import parse_3dm, reduce_3dm
from .instance import (
    format_weight,
    parse_instance,
    parse_solution,
    parse_weight,
    serialize_instance,
    serialize_solution,
    sorted_ids,
)
from .oracle import GenParams, brute_force_smst, gen_random_sunflower, parse_gen_config, verify_solution
from .reduce import STEPS, build_01_subproblem, lift_solution, parse_traces, reduce_chain, serialize_traces
from .ska import backtrack_order, backtrack_search, ska_run
from .solve2 import SolveReport, solve_smst_k2

OK, NO, USAGE = 0, 1, 2
FIXTURE_PREFIX = "fixture:"


class CliError(Exception):
    """Reported on stderr with exit status 2."""


def _read(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def load_instance(path: str | None):
    if path and path.startswith(FIXTURE_PREFIX):
        name = path[len(FIXTURE_PREFIX):]
        if name not in FIXTURES:
            raise CliError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}")
        return FIXTURES[name]()
    return parse_instance(_read(path))


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def _pick_solver(args, k: int) -> str:
    if args.solver:
        if args.solver == "pipeline" and k != 2:
            raise CliError(f"the pipeline solver needs k = 2, instance has k = {k}")
        return args.solver
    if k == 2:
        return "pipeline"
    if k >= 3:
        _warn(f"k = {k}: using the backtracking solver, whose worst case is exponential")
    return "backtrack"


def solve_report(instance, solver: str) -> SolveReport:
    if solver == "pipeline":
        return solve_smst_k2(instance)
    if solver == "backtrack":
        forest, failed = backtrack_search(instance)
        return SolveReport(instance, forest, failed, solver="backtrack")
    res = brute_force_smst(instance)
    forest = SimForest(instance, res.solution) if res.feasible else None
    return SolveReport(instance, forest, solver="oracle")


def cmd_solve(args) -> int:
    instance = load_instance(args.input)
    report = solve_report(instance, _pick_solver(args, instance.k))
    if report.feasible and args.output:
        _write(args.output, serialize_solution(report.forest.edges))
    if args.machine:
        sys.stdout.write(report.to_keyvalue())
    else:
        sys.stdout.write(report.to_text(stages=args.verbose))
        if report.feasible and not args.output:
            sys.stdout.write(serialize_solution(report.forest.edges))
    return OK if report.feasible else NO


def cmd_oracle(args) -> int:
    instance = load_instance(args.input)
    res = brute_force_smst(instance, all_solutions=args.all, guard=args.guard)
    if args.output and res.feasible:
        _write(args.output, serialize_solution(res.solution))
    if args.machine:
        lines = [f"feasible={'true' if res.feasible else 'false'}", "solver=oracle"]
        if res.feasible:
            forest = SimForest(instance, res.solution)
            lines += [f"weight.g{i}={format_weight(w)}" for i, w in sorted(forest.weights.items())]
            lines.append("edges=" + ",".join(sorted_ids(res.solution)))
        if args.all:
            lines.append(f"solutions={len(res.solutions)}")
        print("\n".join(lines))
    else:
        if not res.feasible:
            print("infeasible")
        else:
            print("solution: " + " ".join(sorted_ids(res.solution)))
        if args.all:
            print(f"{len(res.solutions)} solution(s)")
            for s in res.solutions:
                print("  " + " ".join(sorted_ids(s)))
    return OK if res.feasible else NO


def cmd_reduce(args) -> int:
    instance = load_instance(args.input)
    traces = []
    if args.partial is not None:
        if args.weight is None:
            raise CliError("--partial needs --weight")
        partial = parse_solution(_read(args.partial))
        instance, trace = build_01_subproblem(instance, partial, parse_weight(args.weight))
        traces.append(trace)
    steps = args.steps or list(STEPS)
    reduced, more = reduce_chain(instance, steps)
    traces += more
    _write(args.output, serialize_instance(reduced))
    if args.trace:
        _write(args.trace, serialize_traces(traces))
    print(f"{' -> '.join(steps)}: size {instance.size()} -> {reduced.size()}", file=sys.stderr)
    return OK


def cmd_lift(args) -> int:
    traces = parse_traces(_read(args.trace))
    solution = parse_solution(_read(args.input))
    reduced = load_instance(args.reduced) if args.reduced else None
    lifted = lift_solution(traces, solution, reduced)
    if args.original:
        problems = verify_solution(load_instance(args.original), lifted)
        for p in problems:
            print(p, file=sys.stderr)
        if problems:
            return NO
    _write(args.output, serialize_solution(lifted))
    return OK


def _gen_params(args) -> GenParams:
    params = parse_gen_config(_read(args.config)) if args.config else GenParams()
    for key in ("k", "core", "p", "edges"):
        value = getattr(args, key)
        if value is not None:
            setattr(params, key, value)
    if args.exclusive is not None:
        params.exclusive = args.exclusive[0] if len(args.exclusive) == 1 else args.exclusive
    if args.palette is not None:
        params.palette = [parse_weight(x) for x in args.palette.split(",")]
    if args.weights is not None:
        params.palette = [Fraction(w) for w in range(1, args.weights + 1)]
    if args.seed is not None:
        params.seed = args.seed
    params.check()
    return params


def cmd_gen(args) -> int:
    params = _gen_params(args)
    instance = gen_planted_sunflower(params, args.tie) if args.planted else gen_random_sunflower(params)
    _write(args.output, serialize_instance(instance))
    return OK


def cmd_gen_3dm(args) -> int:
    problem = parse_3dm(_read(args.input))
    result = reduce_3dm(problem)
    if result.trivially_infeasible:
        print(f"trivially infeasible: {result.reason}", file=sys.stderr)
        return NO
    _write(args.output, serialize_instance(result.instance))
    if args.map:
        corr = result.correspondence
        lines = ["map 1", f"center {corr.center}"]
        lines += [f"triple {' '.join(t)} {corr.triple_vertex[t]} {corr.ray[t]}" for t in problem.triples]
        lines += [f"element {x} {v}" for x, v in corr.element_vertex.items()]
        _write(args.map, "\n".join(lines) + "\n")
    return OK


def cmd_replay(args) -> int:
    instance = load_instance(args.input)
    if args.order:
        order = [line.split("#", 1)[0].strip() for line in _read(args.order).splitlines()]
        order = [x for x in order if x]
    else:
        order = backtrack_order(instance)
        if order is None:
            print("no universal order succeeds", file=sys.stderr)
            return NO
    outcome = ska_run(instance, order)
    if args.output:
        _write(args.output, "\n".join(order) + "\n")
    if args.machine:
        print(f"ok={'true' if outcome.ok else 'false'}")
        if outcome.ok:
            print("edges=" + ",".join(sorted_ids(outcome.forest.edges)))
        else:
            print(f"failed.edge={outcome.failed_edge}\nfailed.weight={format_weight(outcome.failed_weight)}")
    elif outcome.ok:
        print("ok: " + " ".join(sorted_ids(outcome.forest.edges)))
    else:
        print(f"failed at edge {outcome.failed_edge} (weight {format_weight(outcome.failed_weight)})")
    return OK if outcome.ok else NO


def cmd_verify(args) -> int:
    instance = load_instance(args.input)
    solution = parse_solution(_read(args.solution))
    try:
        problems = verify_solution(instance, solution)
    except KeyError as exc:
        print(f"invalid solution: {exc.args[0]}", file=sys.stderr)
        return NO
    if args.machine:
        print(f"valid={'false' if problems else 'true'}")
        print(f"violations={len(problems)}")
    for p in problems:
        print(p, file=sys.stderr)
    if not problems and not args.machine:
        print("valid")
    return NO if problems else OK


def cmd_bench(args) -> int:
    params = _gen_params(args)
    solvers = args.solvers.split(",") if args.solvers else list(SOLVERS)
    unknown = [s for s in solvers if s not in SOLVERS]
    if unknown:
        raise CliError(f"unknown solver(s): {', '.join(unknown)}")
    result = race(params, args.count, solvers, planted=args.planted, tie=args.tie, jobs=args.jobs)
    sys.stdout.write(result.table())
    return NO if result.disagreements else OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="smst", description="Simultaneous minimum spanning trees on sunflower graph families.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, output=True):
        p.add_argument("--input", "-i", help=f"input file ('-' for stdin, '{FIXTURE_PREFIX}NAME' for a built-in example)")
        if output:
            p.add_argument("--output", "-o", help="output file (default stdout)")
        p.add_argument("--machine", action="store_true", help="key=value output")
        p.add_argument("--verbose", "-v", action="store_true")

    def gen_flags(p):
        p.add_argument("--config", help="file of key = value generator parameters")
        p.add_argument("--seed", type=int)
        p.add_argument("--k", type=int)
        p.add_argument("--core", type=int)
        p.add_argument("--exclusive", type=int, nargs="+", help="exclusive vertex count, or one per graph")
        p.add_argument("--p", type=float, help="edge probability")
        p.add_argument("--edges", type=int, help="target edge count (overrides --p)")
        p.add_argument("--palette", help="comma-separated weights")
        p.add_argument("--weights", type=int, help="palette 1..N")
        p.add_argument("--planted", action="store_true", help="plant a solution so the instance is feasible")
        p.add_argument("--tie", type=float, default=0.2, help="tie probability for --planted")

    p = sub.add_parser("solve", help="solve an instance")
    common(p)
    p.add_argument("--solver", choices=SOLVERS, help="default: pipeline for k = 2, backtrack otherwise")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="brute-force solve a small instance")
    common(p)
    p.add_argument("--all", action="store_true", help="list every solution")
    p.add_argument("--guard", type=int, default=16, help="edge limit per graph")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("reduce", help="apply reduction steps to a {0,1} instance")
    common(p)
    p.add_argument("--steps", nargs="+", choices=STEPS)
    p.add_argument("--trace", help="where to write the reduction trace")
    p.add_argument("--partial", help="partial solution file; first build the {0,1} subproblem for --weight")
    p.add_argument("--weight", help="stage weight for --partial")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("lift", help="map a solution of a reduced instance back")
    common(p)
    p.add_argument("--trace", required=True)
    p.add_argument("--reduced", help="reduced instance, to check the input solution")
    p.add_argument("--original", help="original instance, to check the lifted solution")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--output", "-o")
    gen_flags(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("gen-3dm", help="build the three-graph instance of a 3D matching problem")
    common(p)
    p.add_argument("--map", help="where to write the element/triple correspondence")
    p.set_defaults(func=cmd_gen_3dm)

    p = sub.add_parser("replay", help="run simultaneous Kruskal along a universal order")
    common(p)
    p.add_argument("--order", help="edge ids, one per line (default: an order found by backtracking)")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("verify", help="check a solution file")
    common(p, output=False)
    p.add_argument("--solution", "-s", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="race solvers over generated instances")
    gen_flags(p)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--solvers", help=f"comma-separated subset of {','.join(SOLVERS)}")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError) as exc:  # format, precondition and guard errors are ValueErrors
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
