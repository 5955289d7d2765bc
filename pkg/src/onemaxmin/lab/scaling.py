"""Ratio-stability test for runtime scaling laws."""
from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional

from ..records import TrialRecord

DEFAULT_THRESHOLD = 1.5


def _lg(n: int) -> float:
    return max(1.0, math.log(n))


def default_population(algorithm: str, k: int) -> int:
    if algorithm == "nsga2":
        return 4 * (k + 1)
    if algorithm == "smsemoa":
        return k + 1
    return max(k, 1)


LAWS: dict[str, Callable[[str, int, int], float]] = {
    "k-n-log-n": lambda alg, n, k: max(k, 1) * n * _lg(n),
    "n-log-n": lambda alg, n, k: n * _lg(n),
    "pop-n-log-n": lambda alg, n, k: default_population(alg, k) * n * _lg(n),
}

METRICS = ("evals_full_coverage", "evals_first_pareto")


@dataclass
class ScalingFit:
    algorithm: str
    law: str
    metric: str
    per_n: dict = field(default_factory=dict)   # n -> {"mean", "variance", "count"}
    ratio: float = math.nan
    threshold: float = DEFAULT_THRESHOLD
    excluded_censored: int = 0

    @property
    def passed(self) -> bool:
        return self.ratio <= self.threshold

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm, "law": self.law, "metric": self.metric,
            "per_n": {str(n): v for n, v in sorted(self.per_n.items())},
            "ratio": self.ratio, "threshold": self.threshold,
            "excluded_censored": self.excluded_censored,
            "verdict": "PASS" if self.passed else "FAIL",
        }


def fit_scaling(records: Iterable[TrialRecord], law: str = "k-n-log-n",
                threshold: float = DEFAULT_THRESHOLD, metric: str = "evals_full_coverage",
                population: Optional[int] = None) -> ScalingFit:
    """Per-n means of ``metric / law(n, k)`` and their max/min ratio.

    Censored records (or records missing ``metric``) are excluded and counted.
    ``population`` overrides the default population size of the
    ``pop-n-log-n`` law.
    """
    if law not in LAWS:
        raise ValueError(f"unknown law {law!r}; choose from {sorted(LAWS)}")
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}")
    records = list(records)
    algs = {r.algorithm for r in records}
    if len(algs) != 1:
        raise ValueError(f"fit one algorithm at a time, got {sorted(algs)}")
    alg = algs.pop()
    norm = LAWS[law]
    if population is not None and law == "pop-n-log-n":
        norm = lambda a, n, k: population * n * _lg(n)  # noqa: E731
    groups: dict[int, list[float]] = {}
    excluded = 0
    for r in records:
        value = getattr(r, metric)
        if r.censored and metric == "evals_full_coverage" or value is None:
            excluded += 1
            continue
        groups.setdefault(r.n, []).append(value / norm(alg, r.n, r.k))
    if len(groups) < 2:
        raise ValueError("need uncensored records at two or more distinct n")
    fit = ScalingFit(alg, law, metric, threshold=threshold, excluded_censored=excluded)
    for n, vals in sorted(groups.items()):
        fit.per_n[n] = {
            "mean": statistics.fmean(vals),
            "variance": statistics.pvariance(vals) if len(vals) > 1 else 0.0,
            "count": len(vals),
        }
    means = [v["mean"] for v in fit.per_n.values()]
    fit.ratio = max(means) / min(means) if min(means) > 0 else math.inf
    return fit


def fit_groups(records: Iterable[TrialRecord], law: str = "k-n-log-n",
               threshold: float = DEFAULT_THRESHOLD,
               metric: str = "evals_full_coverage") -> list[ScalingFit]:
    """One fit per (algorithm, k/n) group that spans at least two values of n."""
    groups: dict[tuple, list[TrialRecord]] = {}
    for r in records:
        groups.setdefault((r.algorithm, Fraction(r.k, r.n)), []).append(r)
    fits = []
    for (alg, frac), recs in sorted(groups.items(), key=lambda kv: (kv[0][0], kv[0][1])):
        if len({r.n for r in recs}) < 2:
            continue
        fits.append(fit_scaling(recs, law, threshold, metric))
    return fits
