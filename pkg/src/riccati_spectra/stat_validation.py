"""Goodness-of-fit helpers for the validation suites.

Small, hand-rolled implementations: two-sided Kolmogorov-Smirnov distance
against a caller-supplied CDF, the variance/mean dispersion statistic for
Poisson count data, and Wilson score intervals for binomial fractions.
Thresholds always belong to the caller; nothing here hard-codes one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.special import ndtri


@dataclass(frozen=True)
class FitReport:
    statistic: float
    n: int
    threshold: float
    passed: bool

    def __post_init__(self) -> None:
        if self.passed != (self.statistic <= self.threshold):
            raise ValueError("passed must equal statistic <= threshold")


def ks_distance(
    samples: Sequence[float],
    cdf: Callable[[np.ndarray], np.ndarray],
    threshold: float = math.inf,
) -> FitReport:
    """Two-sided KS distance sup_x |F_n(x) - F(x)| against a given CDF.

    The supremum over a right-continuous step function is attained at the
    sorted samples, comparing F against both i/n and (i-1)/n there.  At
    least 20 samples are required; fewer make the distance meaningless for
    the tolerances used downstream.
    """
    xs = np.sort(np.asarray(samples, dtype=float))
    n = xs.size
    if n < 20:
        raise ValueError("ks_distance requires at least 20 samples")
    fv = np.asarray(cdf(xs), dtype=float)
    hi = np.arange(1, n + 1) / n
    lo = np.arange(0, n) / n
    stat = float(np.max(np.maximum(hi - fv, fv - lo)))
    return FitReport(statistic=stat, n=n, threshold=threshold, passed=stat <= threshold)


def poisson_dispersion(
    counts: Sequence[float], threshold: float = math.inf
) -> FitReport:
    """Sample variance over sample mean of interval counts.

    Near 1 for Poisson data.  A zero mean leaves the ratio undefined and is
    rejected.
    """
    c = np.asarray(counts, dtype=float)
    if c.size == 0:
        raise ValueError("counts must be nonempty")
    mean = float(c.mean())
    if mean == 0.0:
        raise ValueError("dispersion undefined for zero-mean counts")
    var = float(c.var(ddof=1)) if c.size > 1 else 0.0
    stat = var / mean
    return FitReport(
        statistic=stat, n=int(c.size), threshold=threshold, passed=stat <= threshold
    )


def wilson_interval(k: int, n: int, level: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial fraction k/n."""
    if not 0 <= k <= n or n == 0:
        raise ValueError("need 0 <= k <= n with n > 0")
    if not 0.0 < level < 1.0:
        raise ValueError("level must be in (0, 1)")
    z = float(ndtri(0.5 + 0.5 * level))
    p = k / n
    denom = 1.0 + z * z / n
    mid = (p + z * z / (2 * n)) / denom
    half = (z / denom) * math.sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n))
    # at the boundary the score equation's outer root is exactly 0 or 1;
    # rounding in mid +- half must not pull it inside
    lo = 0.0 if k == 0 else max(0.0, mid - half)
    hi = 1.0 if k == n else min(1.0, mid + half)
    return (lo, hi)
