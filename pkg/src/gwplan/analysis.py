"""Metric post-processing: CDF/CCDF steps, nearest-rank percentiles,
multi-run aggregation, and strategy gain computation."""
from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class MetricSeries:
    values: list[float]
    scenario_id: str = ""
    strategy: str = ""
    seed: str = ""

    def __post_init__(self):
        if not self.values:
            raise ValueError("metric series must not be empty")

    def mean(self) -> float:
        return sum(self.values) / len(self.values)


def cdf(values: list[float]) -> list[tuple[float, float]]:
    """Right-continuous step function F(x) = fraction of samples <= x."""
    if not values:
        raise ValueError("cdf of an empty series is undefined")
    n = len(values)
    steps = []
    seen = 0
    for v in sorted(values):
        seen += 1
        if steps and steps[-1][0] == v:
            steps[-1] = (v, seen / n)
        else:
            steps.append((v, seen / n))
    return steps


def ccdf(values: list[float]) -> list[tuple[float, float]]:
    """Step function F'(x) = fraction of samples strictly greater than x."""
    return [(x, 1.0 - f) for x, f in cdf(values)]


def percentile(values: list[float], p: float) -> float:
    """Nearest-rank percentile: smallest sample v with cdf(v) >= p."""
    if not values:
        raise ValueError("percentile of an empty series is undefined")
    if not 0.0 < p < 1.0:
        raise ValueError(f"percentile fraction must be in (0, 1), got {p}")
    ordered = sorted(values)
    rank = math.ceil(p * len(ordered))
    return ordered[rank - 1]


def gain(treatment: MetricSeries | list[float],
         baseline: MetricSeries | list[float], p: float) -> float:
    """Relative percentile difference; positive means treatment is larger.

    For delay-style metrics (smaller is better) the report layer inverts
    the sign.
    """
    tv = treatment.values if isinstance(treatment, MetricSeries) else treatment
    bv = baseline.values if isinstance(baseline, MetricSeries) else baseline
    base = percentile(bv, p)
    if base == 0:
        raise ZeroDivisionError("baseline percentile is zero, gain undefined")
    return (percentile(tv, p) - base) / base


def aggregate_runs(runs: list[MetricSeries]) -> MetricSeries:
    """One mean value per run, preserving run order."""
    if not runs:
        raise ValueError("need at least one run to aggregate")
    return MetricSeries(values=[run.mean() for run in runs],
                        scenario_id=runs[0].scenario_id,
                        strategy=runs[0].strategy)


def write_step_csv(steps: list[tuple[float, float]], path) -> None:
    """Two-column dump of a CDF/CCDF step function for external plotting."""
    with open(path, "w") as f:
        f.write("x,fraction\n")
        for x, frac in steps:
            f.write(f"{x},{frac}\n")


def write_report_csv(rows: list[dict], path) -> None:
    """Comparison report rows: strategy, metric, percentile, value, gain."""
    with open(path, "w") as f:
        f.write("strategy,metric,percentile,value,gain_vs_baseline\n")
        for row in rows:
            g = row.get("gain_vs_baseline")
            f.write(f"{row['strategy']},{row['metric']},{row['percentile']},"
                    f"{row['value']},{'' if g is None else g}\n")
