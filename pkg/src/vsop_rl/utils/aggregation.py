from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd
from statsmodels.stats.weightstats import DescrStatsW, ttest_ind

from vsop_rl.config import TrainConfig
from vsop_rl.exceptions import AlignmentError
from vsop_rl.trainer import read_metrics

STATISTICS = ("mean", "median")

# Asymptotic SE of the median relative to the mean for normal samples
MEDIAN_SE_FACTOR = np.sqrt(np.pi / 2)


#-------------------------------------------------------------------------

@dataclass
class RunLog:
    algorithm: str
    seed: int
    metrics: pd.DataFrame
    path: Path | None = None

    def eval_curve(self) -> pd.Series:
        evaluated = self.metrics.dropna(subset=["eval_return_mean"])

        return pd.Series(
            evaluated["eval_return_mean"].to_numpy(dtype=np.float64),
            index=evaluated["global_step"].to_numpy(dtype=np.int64)
        )


@dataclass
class TTestResult:
    statistic: float
    pvalue: float
    df: float
    paired: bool


@dataclass
class AggregateSummary:

    """ steps: shared evaluation steps; centre/se: per algorithm arrays
        over steps; finals: final evaluation return per seed;
        tests: algorithm vs baseline on the final returns """

    statistic: str
    steps: np.ndarray
    centre: dict[str, np.ndarray] = field(default_factory=dict)
    se: dict[str, np.ndarray] = field(default_factory=dict)
    finals: dict[str, np.ndarray] = field(default_factory=dict)
    tests: dict[str, TTestResult] = field(default_factory=dict)
    baseline: str | None = None

    def to_frame(self) -> pd.DataFrame:
        columns = {"global_step": self.steps}

        for name in self.centre:
            columns[f"{name}_{self.statistic}"] = self.centre[name]
            columns[f"{name}_se"] = self.se[name]

        return pd.DataFrame(columns)


#-------------------------------------------------------------------------

def load_runs(runs_dir: str | Path) -> list[RunLog]:
    """ Every directory under runs_dir holding metrics.csv and
        config.resolved.yml is one run """

    runs = []

    for metrics_path in sorted(Path(runs_dir).rglob("metrics.csv")):
        config = TrainConfig.load(metrics_path.parent / "config.resolved.yml")
        runs.append(RunLog(config.algorithm, config.seed, read_metrics(metrics_path), metrics_path.parent))

    return runs


def group_runs(runs: list[RunLog]) -> dict[str, list[RunLog]]:
    groups: dict[str, list[RunLog]] = {}

    for run in runs:
        groups.setdefault(run.algorithm, []).append(run)

    for name in groups:
        groups[name].sort(key=lambda r: r.seed)

    return groups


def align(runs: list[RunLog]) -> tuple[np.ndarray, np.ndarray]:
    """ Returns (steps, returns[run, step]); every run must share the
        same evaluation steps """

    curves = [run.eval_curve() for run in runs]

    if not curves or len(curves[0]) == 0:
        raise AlignmentError("No evaluation rows to aggregate")

    steps = curves[0].index.to_numpy()

    for run, curve in zip(runs, curves):
        if not np.array_equal(curve.index.to_numpy(), steps):
            raise AlignmentError(
                f"Run {run.algorithm} seed {run.seed} evaluated at different steps"
            )

    return steps, np.stack([curve.to_numpy() for curve in curves])


def centre_and_se(returns: np.ndarray, statistic: str = "mean") -> tuple[np.ndarray, np.ndarray]:
    """ Column-wise centre with its standard error over runs (rows) """

    if statistic not in STATISTICS:
        raise ValueError(f"Unknown statistic {statistic}, choose from {STATISTICS}")

    n = returns.shape[0]
    se = np.std(returns, axis=0, ddof=1) / np.sqrt(n)

    if statistic == "median":
        return np.median(returns, axis=0), MEDIAN_SE_FACTOR * se

    return np.mean(returns, axis=0), se


#-------------------------------------------------------------------------

def _degenerate(diff_mean: float) -> tuple[float, float]:
    if diff_mean == 0.0:
        return 0.0, 1.0

    return float(np.copysign(np.inf, diff_mean)), 0.0


def welch_ttest(a: np.ndarray, b: np.ndarray) -> TTestResult:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)

    if np.var(a) == 0.0 and np.var(b) == 0.0:
        statistic, pvalue = _degenerate(float(np.mean(a) - np.mean(b)))
        return TTestResult(statistic, pvalue, float(a.size + b.size - 2), False)

    statistic, pvalue, df = ttest_ind(a, b, usevar="unequal")

    return TTestResult(float(statistic), float(pvalue), float(df), False)


def paired_ttest(a: np.ndarray, b: np.ndarray) -> TTestResult:
    diff = np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64)

    if np.var(diff) == 0.0:
        statistic, pvalue = _degenerate(float(np.mean(diff)))
        return TTestResult(statistic, pvalue, float(diff.size - 1), True)

    statistic, pvalue, df = DescrStatsW(diff).ttest_mean()

    return TTestResult(float(statistic), float(pvalue), float(df), True)


#-------------------------------------------------------------------------

def aggregate(
    runs: list[RunLog],
    baseline: str | None = None,
    statistic: str = "mean",
    paired: bool = True
) -> AggregateSummary:

    """ Per-step centre and +-1 SE band per algorithm, and t-tests of
        the final evaluation returns of every algorithm against the
        baseline. Paired tests match runs by seed. """

    groups = group_runs(runs)

    if baseline is not None and baseline not in groups:
        raise ValueError(f"Baseline {baseline} not among {sorted(groups)}")

    steps = None
    summary = AggregateSummary(statistic, np.array([]), baseline=baseline)

    for name, group in groups.items():
        if len(group) < 2:
            raise AlignmentError(f"Need at least 2 runs for {name}, got {len(group)}")

        group_steps, returns = align(group)

        if steps is None:
            steps = group_steps
        elif not np.array_equal(steps, group_steps):
            raise AlignmentError(f"{name} evaluated at different steps from other algorithms")

        summary.centre[name], summary.se[name] = centre_and_se(returns, statistic)
        summary.finals[name] = returns[:, -1]

    summary.steps = steps

    if baseline is None:
        return summary

    for name, group in groups.items():
        if name == baseline:
            continue

        if paired:
            seeds = [r.seed for r in group]
            if seeds != [r.seed for r in groups[baseline]]:
                raise AlignmentError(f"Paired test needs the same seeds for {name} and {baseline}")
            summary.tests[name] = paired_ttest(summary.finals[name], summary.finals[baseline])
        else:
            summary.tests[name] = welch_ttest(summary.finals[name], summary.finals[baseline])

    return summary


def plot_summary(summary: AggregateSummary, save_path: str | Path) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    _, ax = plt.subplots(figsize=(6, 4))

    for name, centre in summary.centre.items():
        se = summary.se[name]
        ax.plot(summary.steps, centre, label=name)
        ax.fill_between(summary.steps, centre - se, centre + se, alpha=0.3)

    ax.set_xlabel("Environment steps")
    ax.set_ylabel(f"Evaluation return ({summary.statistic} +- SE)")
    ax.legend()
    plt.tight_layout()
    plt.savefig(save_path, dpi=250)
    plt.close()
