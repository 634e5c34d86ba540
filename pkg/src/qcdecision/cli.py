"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import math
import re
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .decision import batch_solve
from .errors import DomainError, InvalidScenarioError, UnboundedSampleSizeError
from .quantiles import QuantileMode
from .reports import (
    decision_csv,
    decision_report_text,
    report_rows,
    sweep_csv,
    value_table_csv,
    write_text,
)
from .sampling import (
    SampleObservation,
    TestConfig,
    min_sample_size_type1,
    min_sample_size_type2,
    sample_defect_rate,
    sweep_type1,
    sweep_type2,
    test_lot,
)
from .scenarios import ScenarioFileError, dump_scenarios, load_scenarios

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_IO = 3


class InputError(Exception):
    """Invalid input detected after argument parsing."""


def _number(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
    return value


def probability(text: str) -> float:
    value = _number(text)
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"must lie strictly between 0 and 1, got {text!r}")
    return value


def positive_real(text: str) -> float:
    value = _number(text)
    if not value > 0.0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text!r}")
    return value


def _integer(text: str, minimum: int) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < minimum:
        raise argparse.ArgumentTypeError(f"must be >= {minimum}, got {text!r}")
    return value


def positive_int(text: str) -> int:
    return _integer(text, 1)


def nonnegative_int(text: str) -> int:
    return _integer(text, 0)


def quantile_mode(text: str) -> QuantileMode:
    try:
        return QuantileMode.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _add_mode(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", type=quantile_mode, default=QuantileMode.PRECISE,
                   help="critical-value precision: precise (default) or paper-rounded")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qcdecision", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    plan = sub.add_parser("plan", help="minimum sample size for an inspection plan")
    plan_sub = plan.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    t1 = plan_sub.add_parser("type1", help="size the sample from an error limit d")
    t1.add_argument("--p0", type=probability, required=True, help="nominal defect rate")
    t1.add_argument("--alpha", type=probability, default=0.05, help="significance level (default 0.05)")
    t1.add_argument("--error-limit", type=probability, required=True, help="absolute error limit d")
    _add_mode(t1)
    t2 = plan_sub.add_parser("type2", help="size the sample against a true defect rate p1")
    t2.add_argument("--p0", type=probability, required=True, help="nominal defect rate")
    t2.add_argument("--p1", type=probability, required=True, help="true defect rate to detect")
    t2.add_argument("--power", type=probability, default=0.90, help="power 1-beta (default 0.90)")
    _add_mode(t2)

    test = sub.add_parser("test", help="one-sided test of an observed sample against p0")
    test.add_argument("--p0", type=probability, required=True)
    test.add_argument("--alpha", type=probability, default=0.05)
    test.add_argument("--n", type=positive_int, required=True, help="sample size")
    test.add_argument("--defects", type=nonnegative_int, required=True, help="defectives found")
    _add_mode(test)

    sweep = sub.add_parser("sweep", help="sample size over a grid, written as CSV")
    sweep_sub = sweep.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    s1 = sweep_sub.add_parser("type1", help="sweep the error limit d")
    s1.add_argument("--p0", type=probability, required=True)
    s1.add_argument("--alpha", type=probability, default=0.05)
    s1.add_argument("--from", dest="start", type=positive_real, default=0.02)
    s1.add_argument("--to", dest="stop", type=positive_real, default=0.09)
    s1.add_argument("--step", type=positive_real, default=0.01)
    s1.add_argument("--out", help="CSV path (default: standard output)")
    _add_mode(s1)
    s2 = sweep_sub.add_parser("type2", help="sweep the true defect rate p1")
    s2.add_argument("--p0", type=probability, required=True)
    s2.add_argument("--power", type=probability, default=0.90)
    s2.add_argument("--from", dest="start", type=probability, default=0.04)
    s2.add_argument("--to", dest="stop", type=probability, default=0.08)
    s2.add_argument("--step", type=positive_real, default=0.01)
    s2.add_argument("--out", help="CSV path (default: standard output)")
    _add_mode(s2)

    decide = sub.add_parser("decide", help="optimal test/dismantle decisions per scenario")
    decide.add_argument("--scenario", required=True, help="JSON scenario file")
    decide.add_argument("--all", action="store_true", help="also print the 16-row value table per scenario")
    decide.add_argument("--csv", help="write the report as CSV (name,s1,s2,s3,s4,value)")
    decide.add_argument("--tables-dir", help="write each value table to DIR/<index>_<name>.csv")
    decide.add_argument("--echo", help="write the parsed scenarios back as JSON")
    return parser


# -- commands -----------------------------------------------------------------


def _print_plan(plan) -> None:
    print(f"plan={plan.error_type_controlled.value}")
    print(f"n={plan.sample_size}")
    print(f"quantile={plan.quantile_used:.6f}")
    print(f"raw_size={plan.raw_size:.6f}")
    print(f"advisory={plan.advisory or 'none'}")


def cmd_plan(args: argparse.Namespace) -> int:
    if args.kind == "type1":
        plan = min_sample_size_type1(args.p0, args.error_limit, args.alpha, args.mode)
    else:
        try:
            plan = min_sample_size_type2(args.p0, args.p1, args.power, args.mode)
        except UnboundedSampleSizeError as exc:
            raise InputError(f"--p1: {exc}") from None
    _print_plan(plan)
    return EXIT_OK


def cmd_test(args: argparse.Namespace) -> int:
    if args.defects > args.n:
        raise InputError(f"--defects: {args.defects} exceeds sample size --n {args.n}")
    obs = SampleObservation(args.n, args.defects)
    z, critical, verdict = test_lot(obs, TestConfig(args.p0, args.alpha, quantile_mode=args.mode))
    print(f"observed_rate={sample_defect_rate(obs):.6f}")
    print(f"z={z:.6f}")
    print(f"critical={critical:.6f}")
    print(f"verdict={verdict.value}")
    return EXIT_OK


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        write_text(out, text)


def cmd_sweep(args: argparse.Namespace) -> int:
    if args.start > args.stop:
        raise InputError(f"--from: empty range, {args.start} exceeds --to {args.stop}")
    if args.kind == "type1":
        result = sweep_type1(args.p0, args.start, args.stop, args.step, args.alpha, args.mode)
    else:
        result = sweep_type2(args.p0, args.start, args.stop, args.step, args.power, args.mode)
        if result.failures:
            bad = result.failures[0]
            raise InputError(f"grid point p1={bad.swept_value:.6f}: {bad.error}")
    _emit(sweep_csv(result), args.out)
    return EXIT_OK


def _slug(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "_", name).strip("_") or "scenario"


def cmd_decide(args: argparse.Namespace) -> int:
    try:
        scenarios = load_scenarios(args.scenario)
    except UnicodeDecodeError as exc:
        raise InputError(f"{args.scenario}: not UTF-8 text ({exc.reason})") from None
    except ScenarioFileError as exc:
        raise InputError(f"{args.scenario}: {exc}") from None
    if args.echo:
        write_text(args.echo, dump_scenarios(scenarios))
    results = batch_solve([s.params for s in scenarios])
    rows = report_rows(scenarios, results)
    sys.stdout.write(decision_report_text(rows))
    if args.all:
        for scenario, result in zip(scenarios, results):
            sys.stdout.write(f"\n# value table: {scenario.name}\n")
            sys.stdout.write(value_table_csv(result))
    if args.tables_dir:
        directory = Path(args.tables_dir)
        directory.mkdir(parents=True, exist_ok=True)
        for index, (scenario, result) in enumerate(zip(scenarios, results)):
            write_text(directory / f"{index:02d}_{_slug(scenario.name)}.csv", value_table_csv(result))
    if args.csv:
        write_text(args.csv, decision_csv(rows))
    return EXIT_OK


COMMANDS = {"plan": cmd_plan, "test": cmd_test, "sweep": cmd_sweep, "decide": cmd_decide}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (InputError, DomainError, InvalidScenarioError) as exc:
        print(f"qcdecision: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"qcdecision: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
