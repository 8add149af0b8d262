"""Command-line entry point: ``mindiff {solve,exact,generate,bench,sweep,compare}``.

Exit status: 0 on success, 1 on usage/configuration errors, 2 on I/O or parse errors.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import bench
from .instances import FAMILIES, InstanceSpec, ParseError, generate, read_instance, write_instance
from .model import ConfigurationError, MinDiffError
from .oracle import DEFAULT_LIMIT, solve_exact
from .search import DEFAULT_SEED, default_params_for, ils_mindiff

log = logging.getLogger("mindiff")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _search_flags(p):
    p.add_argument("--m", type=int, help="subset size (overrides the file header)")
    p.add_argument("--time-limit", type=float, help="seconds per run (default: n)")
    p.add_argument("--nbr-max", type=int)
    p.add_argument("--pw", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)


def _overrides(args) -> dict:
    ov = {}
    for flag, key in (("time_limit", "t_max"), ("nbr_max", "nbr_max"), ("pw", "p_w"), ("alpha", "alpha")):
        val = getattr(args, flag, None)
        if val is not None:
            ov[key] = val
    return ov


def _jobs(args) -> int:
    if args.jobs is not None:
        return args.jobs
    env = os.environ.get("MINDIFF_JOBS")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ConfigurationError(f"MINDIFF_JOBS must be an integer, got {env!r}") from None
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mindiff", description="Minimum differential dispersion solver")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="run the iterated local search on one instance")
    p.add_argument("--instance", required=True, type=Path)
    _search_flags(p)
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--output", type=Path, help="write per-instance statistics CSV")

    p = sub.add_parser("exact", help="solve exactly by enumeration")
    p.add_argument("--instance", required=True, type=Path)
    p.add_argument("--m", type=int)
    p.add_argument("--limit", type=int, default=DEFAULT_LIMIT)

    p = sub.add_parser("generate", help="write a synthetic instance")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", type=Path, required=True)

    p = sub.add_parser("bench", help="repeated runs over many instances")
    p.add_argument("--instance", required=True, type=Path, nargs="+")
    _search_flags(p)
    p.add_argument("--runs", type=int, default=40)
    p.add_argument("--jobs", type=int)
    p.add_argument("--output", type=Path, help="statistics CSV")
    p.add_argument("--baseline", type=Path, help="CSV of published results to compare against")
    p.add_argument("--comparison-output", type=Path)

    p = sub.add_parser("sweep", help="vary one parameter")
    p.add_argument("--instance", required=True, type=Path)
    _search_flags(p)
    p.add_argument("--param", required=True, choices=bench.SWEEPABLE)
    p.add_argument("--values", required=True, nargs="+", type=float)
    p.add_argument("--runs", type=int, default=20)
    p.add_argument("--jobs", type=int)
    p.add_argument("--output", type=Path)

    p = sub.add_parser("compare", help="two-tailed sign test between two result CSVs")
    p.add_argument("--a", required=True, type=Path)
    p.add_argument("--b", required=True, type=Path)
    p.add_argument("--column", default="f_best")
    return parser


def _write_or_print(text: str, path):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_solve(args):
    inst = read_instance(args.instance, args.m)
    params = default_params_for(inst, **_overrides(args))
    best = None
    records = []
    for r in range(args.runs):
        res = ils_mindiff(inst, replace(params, seed=args.seed + r))
        records.append(res)
        if best is None or res.best_objective < best.best_objective:
            best = res
    print(f"objective={best.best_objective!r}")
    print("selected=" + ",".join(str(i) for i in best.selected))
    print(f"time_to_best={best.elapsed_to_best:.4f} iterations={best.iterations} seed={best.seed}")
    if args.output:
        st = bench.aggregate(args.instance.stem, inst.n, inst.m,
                             [r.best_objective for r in records], [r.elapsed_to_best for r in records])
        args.output.write_text(bench.emit_report([st]).csv)


def cmd_exact(args):
    inst = read_instance(args.instance, args.m)
    res = solve_exact(inst, args.limit)
    print(f"optimum={res.optimum!r}")
    print("subset=" + ",".join(str(i) for i in res.optimal_subset))
    print(f"enumerated={res.subsets_enumerated}")


def cmd_generate(args):
    inst = generate(InstanceSpec(args.family, args.n, args.m, args.seed))
    write_instance(inst, args.output)
    print(f"wrote {args.output} (n={inst.n}, m={inst.m})")


def cmd_bench(args):
    stats = bench.run_experiment(args.instance, runs=args.runs, seed_base=args.seed,
                                 overrides=_overrides(args), jobs=_jobs(args), m_override=args.m)
    baseline = bench.read_table(args.baseline) if args.baseline else None
    report = bench.emit_report(stats, baseline)
    sys.stdout.write(report.text)
    _write_or_print(report.csv, args.output)
    if report.comparison_csv is not None:
        _write_or_print(report.comparison_csv, args.comparison_output)
    if any(s.failed for s in stats):
        return 2


def cmd_sweep(args):
    inst = read_instance(args.instance, args.m)
    values = [int(v) if args.param != "alpha" else v for v in args.values]
    ov = _overrides(args)
    ov.pop(args.param, None)
    rows = bench.parameter_sweep(inst, args.param, values, runs=args.runs, seed_base=args.seed,
                                 overrides=ov, jobs=_jobs(args))
    _write_or_print(bench.sweep_csv(rows), args.output)


def cmd_compare(args):
    a = bench.read_table(args.a)
    b = bench.read_table(args.b)
    names = [k for k in a if k in b]
    missing = sorted(set(a) ^ set(b))
    if missing:
        log.warning("ignoring %d unmatched instances: %s", len(missing), ", ".join(missing))
    if not names:
        raise ConfigurationError("the two tables share no instance names")
    try:
        col_a = [float(a[k][args.column]) for k in names]
        col_b = [float(b[k][args.column]) for k in names]
    except (KeyError, TypeError, ValueError):
        raise ConfigurationError(f"column {args.column!r} missing or non-numeric") from None
    rep = bench.sign_test(col_a, col_b)
    print(f"column={args.column} X={rep.x}")
    print(f"wins_a={rep.wins_a:g} wins_b={rep.wins_b:g}")
    print(f"CV={rep.critical_value} significant={'yes' if rep.significant else 'no'} p_value={rep.p_value:.4g}")


COMMANDS = {
    "solve": cmd_solve, "exact": cmd_exact, "generate": cmd_generate,
    "bench": cmd_bench, "sweep": cmd_sweep, "compare": cmd_compare,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args) or 0
    except (ParseError, OSError) as exc:
        print(f"mindiff: {exc}", file=sys.stderr)
        return 2
    except (ConfigurationError, MinDiffError) as exc:
        print(f"mindiff: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
