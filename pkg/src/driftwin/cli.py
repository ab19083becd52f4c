"""Command-line interface.

Subcommands: assess (estimate one model's current mean loss), compare
(two models head to head), select (tournament over all models), baseline
(fixed-window pick) and simulate (synthetic scenario benchmark).

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io
from .selection import compare_pair, fixed_window_select, tournament
from .synthetic import (
    ScenarioConfig,
    bounded_drift_means,
    changepoint_means,
    composite_means,
    constant_means,
    run_experiment,
)
from .window import WindowConfig, select_window

USAGE_ERROR, DATA_ERROR, INTERNAL_ERROR = 1, 2, 3

SCENARIOS = ("stationary", "composite", "changepoint", "drift")
CHANGEPOINT_OFFSET = 20  # periods before the horizon where the shift lands
DRIFT_STEP = 0.2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _add_window_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--delta-prime", type=float, default=0.1,
        help="per-window confidence level in (0, 1) (default: 0.1)",
    )
    parser.add_argument(
        "--range-width", type=float, default=0.0,
        help="known width of the value range, 0 to disable (default: 0)",
    )
    parser.add_argument(
        "--tie-break", choices=("smallest_k", "largest_k"), default="smallest_k",
        help="window tie-break policy (default: smallest_k)",
    )


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--output", help="write the machine-readable report here")
    parser.add_argument(
        "--format", choices=("csv", "json"), default="csv",
        help="report format for --output (default: csv)",
    )


def build_parser() -> _Parser:
    parser = _Parser(prog="driftwin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("assess",
                       help="adaptive mean estimate from a period,value CSV")
    p.add_argument("--samples", required=True, help="CSV with header period,value")
    _add_window_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("compare",
                       help="compare two models from a loss CSV")
    p.add_argument("--losses", required=True,
                   help="CSV with header period,sample,model,loss")
    p.add_argument("--models", required=True, metavar="A,B",
                   help="the two model names to compare")
    _add_window_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("select",
                       help="tournament selection over all models in a loss CSV")
    p.add_argument("--losses", required=True,
                   help="CSV with header period,sample,model,loss")
    _add_window_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("baseline",
                       help="fixed-window model selection from a loss CSV")
    p.add_argument("--losses", required=True,
                   help="CSV with header period,sample,model,loss")
    p.add_argument("--window", type=int, required=True,
                   help="look-back window size (required)")
    _add_output_flags(p)

    p = sub.add_parser("simulate",
                       help="run a synthetic scenario benchmark")
    p.add_argument("--scenario", choices=SCENARIOS, default="stationary",
                   help="drift pattern of the true means (default: stationary)")
    p.add_argument("--sigma2", type=float, default=1.0, help="noise variance (default: 1)")
    p.add_argument("--trials", type=int, default=20,
                   help="independent trials to average over (default: 20)")
    p.add_argument("--seed", type=int, default=0, help="master seed (default: 0)")
    p.add_argument("--windows", default="1,4,16,64,256",
                   help="fixed-window menu, ascending (default: 1,4,16,64,256)")
    p.add_argument("--horizon", type=int, default=100,
                   help="number of periods (default: 100)")
    _add_window_flags(p)
    _add_output_flags(p)
    return parser


def _validate_common(parser: _Parser, args: argparse.Namespace) -> None:
    if hasattr(args, "delta_prime") and not 0.0 < args.delta_prime < 1.0:
        parser.error(f"--delta-prime must be in (0, 1), got {args.delta_prime}")
    if hasattr(args, "range_width") and args.range_width < 0.0:
        parser.error(f"--range-width must be >= 0, got {args.range_width}")
    if hasattr(args, "models"):
        names = [m.strip() for m in args.models.split(",")]
        if len(names) != 2 or not all(names) or names[0] == names[1]:
            parser.error(f"--models needs two distinct names, got {args.models!r}")
        args.model_names = names
    if hasattr(args, "window") and args.window < 1:
        parser.error(f"--window must be >= 1, got {args.window}")


def _window_config(args: argparse.Namespace) -> WindowConfig:
    return WindowConfig(
        delta_prime=args.delta_prime,
        range_width=args.range_width,
        tie_break=args.tie_break,
    )


def _parse_menu(parser: _Parser, raw: str) -> tuple[int, ...]:
    try:
        menu = tuple(int(w) for w in raw.split(","))
    except ValueError:
        parser.error(f"--windows must be comma-separated integers, got {raw!r}")
    if not menu or any(w < 1 for w in menu) or list(menu) != sorted(set(menu)):
        parser.error(f"--windows must be ascending positive integers, got {raw!r}")
    return menu


def _emit(args: argparse.Namespace, report) -> None:
    if args.output:
        io.write_report(report, args.output, args.format)


def _cmd_assess(args) -> int:
    diagnostics = select_window(io.read_samples(args.samples), _window_config(args))
    print(f"estimate {diagnostics.estimate:.6g} using window {diagnostics.chosen_window} "
          f"of {diagnostics.n_windows}")
    print("  ".join(f"{c:>10s}" for c in io.DIAGNOSTIC_COLUMNS))
    _, rows = io.report_rows(diagnostics)
    for row in rows:
        print("  ".join(f"{v:>10.4g}" if isinstance(v, float) else f"{v:>10d}" for v in row))
    _emit(args, diagnostics)
    return 0


def _cmd_compare(args) -> int:
    names = args.model_names
    table = io.read_losses(args.losses)
    result = compare_pair(
        table, table.model_index(names[0]), table.model_index(names[1]),
        _window_config(args),
    )
    print(f"winner {table.models[result.winner]} "
          f"(gap {result.gap_estimate:.6g} at window {result.diagnostics.chosen_window})")
    _emit(args, result)
    return 0


def _cmd_select(args) -> int:
    table = io.read_losses(args.losses)
    bracket = tournament(table, _window_config(args))
    for s, rnd in enumerate(bracket.rounds, start=1):
        for match in rnd.matches:
            print(f"round {s}: {table.models[match.first]} vs {table.models[match.second]} "
                  f"-> {table.models[match.winner]} (gap {match.gap_estimate:.6g})")
        if rnd.bye is not None:
            print(f"round {s}: {table.models[rnd.bye]} advances on a bye")
    print(f"champion {table.models[bracket.champion]} "
          f"after {bracket.comparisons_made} comparisons")
    _emit(args, bracket)
    return 0


def _cmd_baseline(args) -> int:
    table = io.read_losses(args.losses)
    pick = fixed_window_select(table, args.window)
    print(f"pick {table.models[pick]} (window {args.window})")
    if args.output:
        io.write_table(args.output, ["model", "index", "window"],
                       [[table.models[pick], pick, args.window]])
    return 0


def _scenario_means(args, config: ScenarioConfig) -> np.ndarray:
    if args.scenario == "stationary":
        return constant_means(config.horizon, 0.0)
    if args.scenario == "composite":
        return composite_means(config)
    if args.scenario == "changepoint":
        return changepoint_means(
            config.horizon, config.horizon - CHANGEPOINT_OFFSET, 0.0, 3.0
        )
    return bounded_drift_means(config.horizon, DRIFT_STEP, seed=config.seed)


def _cmd_simulate(args, parser: _Parser) -> int:
    menu = _parse_menu(parser, args.windows)
    if args.trials < 1:
        parser.error(f"--trials must be >= 1, got {args.trials}")
    if args.horizon < 1:
        parser.error(f"--horizon must be >= 1, got {args.horizon}")
    if args.sigma2 <= 0:
        parser.error(f"--sigma2 must be > 0, got {args.sigma2}")
    if args.seed < 0:
        parser.error(f"--seed must be >= 0, got {args.seed}")
    if args.scenario == "changepoint" and args.horizon <= CHANGEPOINT_OFFSET:
        parser.error(f"--horizon must exceed {CHANGEPOINT_OFFSET} for the changepoint scenario")
    if args.scenario == "composite" and args.horizon <= ScenarioConfig().boundaries[-1]:
        parser.error(
            f"--horizon must exceed {ScenarioConfig().boundaries[-1]} for the composite scenario"
        )

    config = ScenarioConfig(
        horizon=args.horizon, sigma2=args.sigma2, window_menu=menu,
        trials=args.trials, seed=args.seed,
    )
    report = run_experiment(config, _scenario_means(args, config), _window_config(args))
    print(f"scenario {args.scenario}  sigma2 {args.sigma2:g}  horizon {args.horizon}  "
          f"trials {args.trials}  seed {args.seed}")
    print(f"{'method':<8s}  mean_excess_risk")
    for method in report.methods:
        print(f"{method:<8s}  {report.mean_excess[method]:.6g}")
    _emit(args, report)
    return 0


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate_common(parser, args)
    try:
        if args.command == "assess":
            return _cmd_assess(args)
        if args.command == "compare":
            return _cmd_compare(args)
        if args.command == "select":
            return _cmd_select(args)
        if args.command == "baseline":
            return _cmd_baseline(args)
        return _cmd_simulate(args, parser)
    except (io.DataFormatError, ValueError, KeyError, IndexError, OSError) as exc:
        message = exc.args[0] if exc.args else exc
        print(f"driftwin: data error: {message}", file=sys.stderr)
        return DATA_ERROR
    except Exception as exc:  # invariant violation or bug
        print(f"driftwin: internal error: {exc}", file=sys.stderr)
        return INTERNAL_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
