"""Rescaled empirical point processes built from explosion logs.

The blow-up times of the stationary family, divided by the mean exit time
m(a), converge to a unit-rate Poisson process; those of the slow-ramp
family, multiplied by beta (3/8 ln(1/beta))^{1/3}, converge to a Poisson
process with exponentially decaying intensity.  This module performs the
bookkeeping: rescaling, interval counts, and inter-arrival sequences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .riccati_core import ExplosionLog, Linear, Stationary
from .stationary_analysis import DEFAULT_CONFIG, QuadratureConfig, mean_exit_time

_LOG_FLOAT_MAX = math.log(np.finfo(np.float64).max)


@dataclass(frozen=True)
class EmpiricalPointProcess:
    """Strictly increasing points obtained by rescaling an explosion log."""

    points: np.ndarray
    rescale_factor: float
    source: ExplosionLog

    def __post_init__(self) -> None:
        if self.points.size and np.any(np.diff(self.points) <= 0):
            raise ValueError("points must strictly increase")


def rescale_stationary(
    log: ExplosionLog, a: float, config: QuadratureConfig = DEFAULT_CONFIG
) -> EmpiricalPointProcess:
    """Points zeta_i / m(a), the unit-rate normalization of the well family.

    Rejects a for which m(a) overflows double precision; work with the
    log-domain prediction log m(a) directly in that regime instead of
    rescaling empirical times.
    """
    if not isinstance(log.params, Stationary):
        raise ValueError("log does not come from the stationary family")
    ma = mean_exit_time(a, config)
    if ma.log_value > _LOG_FLOAT_MAX:
        raise ValueError(
            "m(a) overflows double precision at this a; "
            "use the log-domain prediction instead"
        )
    factor = 1.0 / ma.value
    return EmpiricalPointProcess(
        points=log.times * factor, rescale_factor=factor, source=log
    )


def rescale_airy(log: ExplosionLog, beta: float) -> EmpiricalPointProcess:
    """Points beta (3/8 ln(1/beta))^{1/3} zeta_k for the slow-ramp family."""
    if not isinstance(log.params, Linear):
        raise ValueError("log does not come from the slow-ramp family")
    if not 0.0 < beta < 1.0:
        raise ValueError("rescaling requires 0 < beta < 1")
    factor = beta * (0.375 * math.log(1.0 / beta)) ** (1.0 / 3.0)
    return EmpiricalPointProcess(
        points=log.times * factor, rescale_factor=factor, source=log
    )


def count(epp: EmpiricalPointProcess, lo: float, hi: float) -> int:
    """Number of points in the half-open interval [lo, hi)."""
    if not lo < hi:
        raise ValueError("interval must satisfy lo < hi")
    return int(
        np.searchsorted(epp.points, hi, side="left")
        - np.searchsorted(epp.points, lo, side="left")
    )


def interarrivals(epp: EmpiricalPointProcess) -> np.ndarray:
    """Successive gaps, prefixed by the first point, so they sum to the last."""
    return np.diff(epp.points, prepend=0.0)


def write_points_csv(epp: EmpiricalPointProcess, dest) -> None:
    """One rescaled point per row."""
    close = False
    if isinstance(dest, (str, bytes)) or hasattr(dest, "__fspath__"):
        handle = open(dest, "w", newline="")
        close = True
    else:
        handle = dest
    try:
        handle.write("point\n")
        for p in epp.points:
            handle.write(f"{float(p)!r}\n")
    finally:
        if close:
            handle.close()
