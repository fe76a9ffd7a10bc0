"""Command-line interface: ``levdun test | simulate | export-ci``.

Exit codes: 0 success, 2 invalid input or arguments, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .dataset import load_csv
from .errors import LevDunError, NumericError, ValidationError
from .inference import TestSpec, max_t_test
from .mvt import MvtSettings
from .simulate import ScenarioSpec, load_scenarios, results_to_csv, run_scenario

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3
DEFAULT_SEED = 20240601


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("LEVDUN_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValidationError(f"LEVDUN_SEED={env!r} is not an integer") from None
    return DEFAULT_SEED


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _add_test_flags(p):
    p.add_argument("--data", required=True, help="CSV file with a header row")
    p.add_argument("--response", help="response column (default: first non-group column)")
    p.add_argument("--group", help="group column (default: first column)")
    p.add_argument("--control", help="label of the control group")
    p.add_argument("--contrast", default="dunnett", choices=["dunnett", "grandmean", "grand_mean"])
    p.add_argument("--alternative", default="greater", choices=["greater", "less", "two-sided", "two_sided"])
    p.add_argument("--modified", action="store_true", help="drop the zero deviation in odd groups")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--seed", type=int, help="seed for all stochastic numerics (env LEVDUN_SEED)")
    p.add_argument("--mvt-budget", type=int, default=100_000, help="QMC points for MVT integrals")


def build_parser():
    parser = _Parser(prog="levdun", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("test", help="run the maxT variance test on a CSV file")
    _add_test_flags(p)
    p.add_argument("--format", default="table", choices=["table", "json", "csv"])
    p.add_argument("--out", help="write the report here instead of stdout")

    p = sub.add_parser("export-ci", help="write simultaneous CI rows as CSV")
    _add_test_flags(p)
    p.add_argument("--out", required=True)

    p = sub.add_parser("simulate", help="Monte Carlo FWER / power estimate")
    p.add_argument("--scenario", help="JSON scenario file (object or list)")
    p.add_argument("--n", type=_int_list, help="group sizes, control first, e.g. 10,10,10,10")
    p.add_argument("--sd", type=_float_list, help="group SDs (default: all 1)")
    p.add_argument("--reps", type=int, default=10_000)
    p.add_argument("--contrast", default="dunnett", choices=["dunnett", "grandmean", "grand_mean"])
    p.add_argument("--alternative", default="greater", choices=["greater", "less", "two-sided", "two_sided"])
    p.add_argument("--modified", action="store_true")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", default="csv", choices=["csv", "json"])
    p.add_argument("--out")
    return parser


def _spec_from_args(args):
    settings = MvtSettings(sample_budget=args.mvt_budget, seed=_seed(args))
    return TestSpec(args.contrast, args.alternative, args.modified, args.alpha, settings)


def _emit(text, out):
    if out:
        try:
            Path(out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise ValidationError(f"cannot write {out}: {exc}") from exc
    else:
        sys.stdout.write(text)


def _report(args):
    spec = _spec_from_args(args)
    try:
        sample = load_csv(args.data, args.response, args.group, args.control)
    except FileNotFoundError as exc:
        raise ValidationError(f"cannot read {args.data}: {exc.strerror}") from exc
    return max_t_test(sample, spec)


def cmd_test(args):
    report = _report(args)
    if args.format == "json":
        text = report.to_json() + "\n"
    elif args.format == "csv":
        text = report.ci_csv()
    else:
        text = report.to_table() + "\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_export_ci(args):
    _emit(_report(args).ci_csv(), args.out)
    return EXIT_OK


def cmd_simulate(args):
    if args.scenario:
        specs = load_scenarios(args.scenario)
    else:
        if not args.n:
            raise ValidationError("give --n (and optionally --sd) or --scenario")
        sds = args.sd or [1.0] * len(args.n)
        specs = [
            ScenarioSpec(
                args.n, sds, args.alternative, args.modified, args.contrast,
                args.alpha, args.reps, _seed(args),
            )
        ]
    if args.workers < 1:
        raise ValidationError("--workers must be >= 1")
    results = [run_scenario(s, workers=args.workers) for s in specs]
    if args.format == "json":
        text = json.dumps([r.to_dict() for r in results], indent=2) + "\n"
    else:
        text = results_to_csv(results)
    _emit(text, args.out)
    return EXIT_OK


COMMANDS = {"test": cmd_test, "export-ci": cmd_export_ci, "simulate": cmd_simulate}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"levdun: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericError as exc:
        print(f"levdun: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except LevDunError as exc:
        print(f"levdun: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
