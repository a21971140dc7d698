import argparse
import sys

import numpy as np

from vsop_rl import RANDOM_SEED
from vsop_rl.cli.training import resolve_config, sweep, train
from vsop_rl.exceptions import VsopError
from vsop_rl.presets import list_presets, preset
from vsop_rl.trainer import evaluate_run
from vsop_rl.utils.aggregation import STATISTICS, aggregate, load_runs, plot_summary
from vsop_rl.verify import SUITES, verify


#-------------------------------------------------------------------------

def _add_config_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", "-c", help="Config YAML", type=str)
    parser.add_argument("--preset", "-p", help="Preset name", type=str)
    parser.add_argument("--set", "-s", help="Override key=value", action="append", default=[], dest="overrides")
    parser.add_argument("--out", "-o", help="Output directory", type=str, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vsop")
    subparsers = parser.add_subparsers(dest="command", required=True)

    train_parser = subparsers.add_parser("train", help="Single seeded training run")
    _add_config_args(train_parser)
    train_parser.add_argument("--seed", help="Random seed", type=int)
    train_parser.add_argument("--quiet", "-q", help="No progress output", action="store_true")

    sweep_parser = subparsers.add_parser("sweep", help="One process per seed")
    _add_config_args(sweep_parser)
    sweep_parser.add_argument("--seeds", "-n", help="Number of seeds", type=int, default=5)
    sweep_parser.add_argument("--first-seed", help="First seed", type=int, default=0)
    sweep_parser.add_argument("--workers", "-w", help="Worker processes", type=int)

    verify_parser = subparsers.add_parser("verify", help="Certification batteries")
    verify_parser.add_argument("--suite", help="Suite name", choices=list(SUITES) + ["all"], default="all")
    verify_parser.add_argument("--seed", help="Random seed", type=int, default=RANDOM_SEED)

    agg_parser = subparsers.add_parser("aggregate", help="Summarise runs")
    agg_parser.add_argument("--runs", "-r", help="Directory of runs", type=str, required=True)
    agg_parser.add_argument("--baseline", "-b", help="Baseline algorithm", type=str)
    agg_parser.add_argument("--statistic", help="Centre statistic", choices=STATISTICS, default="mean")
    agg_parser.add_argument("--welch", help="Unpaired Welch test", action="store_true")
    agg_parser.add_argument("--plot", help="Save learning curves", type=str)
    agg_parser.add_argument("--csv", help="Save per-step summary", type=str)

    preset_parser = subparsers.add_parser("preset", help="List or show presets")
    preset_parser.add_argument("name", help="Preset to print", nargs="?")
    preset_parser.add_argument("--list", "-l", help="List presets", action="store_true")

    eval_parser = subparsers.add_parser("evaluate", help="Evaluate a saved run")
    eval_parser.add_argument("--run", "-r", help="Run directory", type=str, required=True)
    eval_parser.add_argument("--episodes", "-e", help="Episodes", type=int)
    eval_parser.add_argument("--seed", help="Random seed", type=int)

    return parser


#-------------------------------------------------------------------------

def _aggregate(arguments: argparse.Namespace) -> int:
    summary = aggregate(
        load_runs(arguments.runs), arguments.baseline, arguments.statistic, not arguments.welch
    )

    for name in summary.centre:
        final = summary.finals[name]
        print(f"{name}: final {summary.statistic} {summary.centre[name][-1]:.2f} +- {summary.se[name][-1]:.2f} ({final.size} runs)")

    for name, test in summary.tests.items():
        kind = "paired" if test.paired else "Welch"
        print(f"{name} vs {summary.baseline} ({kind}): t = {test.statistic:.4f}, p = {test.pvalue:.4g}")

    if arguments.csv:
        summary.to_frame().to_csv(arguments.csv, index=False)
    if arguments.plot:
        plot_summary(summary, arguments.plot)

    return 0


def _preset(arguments: argparse.Namespace) -> int:
    if arguments.list or arguments.name is None:
        for name in list_presets():
            print(name)
    else:
        print(preset(arguments.name).to_yaml(), end="")

    return 0


def main(argv: list[str] | None = None) -> int:
    arguments = build_parser().parse_args(argv)

    try:
        if arguments.command == "train":
            config = resolve_config(arguments.config, arguments.preset, arguments.overrides, arguments.seed)
            train(config, arguments.out, verbose=False if arguments.quiet else None)

        elif arguments.command == "sweep":
            config = resolve_config(arguments.config, arguments.preset, arguments.overrides)
            sweep(config, arguments.out, arguments.seeds, arguments.first_seed, arguments.workers)

        elif arguments.command == "verify":
            reports = verify(arguments.suite, arguments.seed)
            return 0 if all(r.passed for r in reports) else 1

        elif arguments.command == "aggregate":
            return _aggregate(arguments)

        elif arguments.command == "preset":
            return _preset(arguments)

        elif arguments.command == "evaluate":
            result = evaluate_run(arguments.run, arguments.episodes, arguments.seed)
            print(f"Evaluation return {result.mean:.2f} +- {result.std:.2f} over {len(result.returns)} episodes")
            print(np.array(result.returns))

    except VsopError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2

    return 0


#-------------------------------------------------------------------------

if __name__ == "__main__":
    sys.exit(main())
