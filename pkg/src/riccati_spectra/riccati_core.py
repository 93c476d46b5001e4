"""Explosion-counting integrators for Riccati-type diffusions.

Three drift families are supported: a time-homogeneous double-well drift
a - x^2 with unit noise, a parabolic-in-time drift t - lam - x^2 with
noise amplitude 2/sqrt(beta), and a slow linear ramp (beta/4) t - ell - x^2
with unit noise.  Trajectories dive to -infinity in finite time; each
blow-up is logged with a deterministic residual 1/cutoff added to the
crossing time, and the state restarts at +entry after a lag 1/entry.  The
start from +infinity is realized the same way: state +entry after an
initial offset 1/entry, matching the noiseless transit time of dx = -x^2 dt.

Several spectral levels can share one Brownian path.  They are advanced on
a single level-independent schedule dt = dt0 / (1 + max_k x_k^2), so every
level consumes identical increments and pathwise count comparisons across
levels are meaningful.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import _kernels

_NOISE_CHUNK = 1 << 19
_TIMES_CAP0 = 4096
_REC_CAP0 = 1 << 16


@dataclass(frozen=True)
class Stationary:
    """Time-homogeneous family dx = (a - x^2) dt + dB."""

    a: float


@dataclass(frozen=True)
class Airy:
    """Parabolic family dx = (t - lam - x^2) dt + (2/sqrt(beta)) dB."""

    lam: float
    beta: float

    def __post_init__(self) -> None:
        if not self.beta > 0.0:
            raise ValueError("beta must be positive")


@dataclass(frozen=True)
class Linear:
    """Slow-ramp family dx = ((beta/4) t - ell - x^2) dt + dB."""

    ell: float
    beta: float

    def __post_init__(self) -> None:
        if not self.beta > 0.0:
            raise ValueError("beta must be positive")


DiffusionParams = Union[Stationary, Airy, Linear]


@dataclass(frozen=True)
class NumericsConfig:
    """Integration controls shared by all families.

    dt0 is the base step of the adaptive schedule dt = dt0 / (1 + x^2);
    cutoff is the blow-up threshold M, entry the restart level M'.  Paths
    are sampled every record_dt time units when record_path is set.
    """

    dt0: float = 1e-3
    cutoff: float = 100.0
    entry: float = 100.0
    horizon: float = 10.0
    record_path: bool = False
    record_dt: float = 1e-2
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.dt0 > 0.0:
            raise ValueError("dt0 must be positive")
        if not self.cutoff >= 10.0:
            raise ValueError("cutoff must be at least 10")
        if not self.entry >= 10.0:
            raise ValueError("entry must be at least 10")
        if not self.horizon >= 0.0:
            raise ValueError("horizon must be nonnegative")
        if not self.record_dt > 0.0:
            raise ValueError("record_dt must be positive")


@dataclass(frozen=True)
class PathSample:
    """Recorded (time, state) samples with explicit blow-up gaps.

    segment_ids increments by one at every gap; segment_exploded[j] tells
    whether segment j ended in a blow-up (the final segment is flagged when
    the trajectory was still in post-blow-up transit at the horizon).
    """

    times: np.ndarray
    states: np.ndarray
    segment_ids: np.ndarray
    segment_exploded: tuple[bool, ...]

    def __post_init__(self) -> None:
        if np.any(np.diff(self.times) < 0):
            raise ValueError("sample times must be nondecreasing")
        if self.states.size and not np.all(np.isfinite(self.states)):
            raise ValueError("recorded states must be finite")


@dataclass(frozen=True)
class ExplosionLog:
    """Blow-up times of one trajectory on [0, horizon]."""

    times: np.ndarray
    horizon: float
    params: DiffusionParams
    steps_taken: int
    seed: int = 0
    path: PathSample | None = None

    def __post_init__(self) -> None:
        if self.times.size:
            if np.any(np.diff(self.times) <= 0):
                raise ValueError("explosion times must strictly increase")
            if self.times[0] <= 0.0 or self.times[-1] > self.horizon:
                raise ValueError("explosion times must lie in (0, horizon]")


def drift_at(params: DiffusionParams, x: float, t: float) -> float:
    """Drift of the chosen family at state x and time t."""
    if isinstance(params, Stationary):
        return params.a - x * x
    if isinstance(params, Airy):
        return t - params.lam - x * x
    if isinstance(params, Linear):
        return 0.25 * params.beta * t - params.ell - x * x
    raise TypeError(f"unknown parameter family: {type(params).__name__}")


def _family_layout(params: DiffusionParams) -> tuple[int, str, float, float]:
    if isinstance(params, Stationary):
        return _kernels.FAM_STATIONARY, "a", 0.0, 1.0
    if isinstance(params, Airy):
        return _kernels.FAM_AIRY, "lam", params.beta, 2.0 / math.sqrt(params.beta)
    if isinstance(params, Linear):
        return _kernels.FAM_LINEAR, "ell", params.beta, 1.0
    raise TypeError(f"unknown parameter family: {type(params).__name__}")


def _split_path(t: np.ndarray, xs: np.ndarray, in_transit_at_end: bool) -> PathSample:
    finite = np.isfinite(xs)
    idx = np.nonzero(finite)[0]
    if idx.size == 0:
        return PathSample(
            times=np.empty(0),
            states=np.empty(0),
            segment_ids=np.empty(0, dtype=np.int64),
            segment_exploded=(),
        )
    breaks = np.empty(idx.size, dtype=np.int64)
    breaks[0] = 0
    breaks[1:] = (np.diff(idx) > 1).astype(np.int64)
    seg = np.cumsum(breaks)
    n_seg = int(seg[-1]) + 1
    exploded = [True] * (n_seg - 1) + [in_transit_at_end]
    return PathSample(
        times=t[idx].copy(),
        states=xs[idx].copy(),
        segment_ids=seg,
        segment_exploded=tuple(exploded),
    )


def _run_family(
    per_level_params: list[DiffusionParams],
    levels: np.ndarray,
    numerics: NumericsConfig,
    seed: int,
) -> list[ExplosionLog]:
    fam, _, beta, namp = _family_layout(per_level_params[0])
    K = levels.size
    sc = np.zeros(3)
    ic = np.zeros(4, dtype=np.int64)
    x = np.full(K, np.nan)
    active = np.zeros(K, dtype=np.uint8)
    reentry = np.full(K, 1.0 / numerics.entry)
    counts = np.zeros(K, dtype=np.int64)
    times = np.empty((K, _TIMES_CAP0))
    record_dt = numerics.record_dt if numerics.record_path else 0.0
    rec_cap = _REC_CAP0 if numerics.record_path else 1
    rec_t = np.empty(rec_cap)
    rec_x = np.empty((K, rec_cap))
    sc[1] = record_dt

    rng = np.random.Generator(np.random.Philox(key=seed))
    noise = rng.standard_normal(_NOISE_CHUNK)
    while True:
        status = _kernels.advance_family(
            fam,
            levels,
            beta,
            namp,
            numerics.dt0,
            numerics.cutoff,
            numerics.entry,
            numerics.horizon,
            record_dt,
            noise,
            sc,
            ic,
            x,
            active,
            reentry,
            counts,
            times,
            rec_t,
            rec_x,
        )
        if status == _kernels.DONE:
            break
        used = int(ic[3])
        if status == _kernels.NEED_NOISE:
            noise = rng.standard_normal(_NOISE_CHUNK)
        elif status == _kernels.GROW_TIMES:
            grown = np.empty((K, times.shape[1] * 2))
            grown[:, : times.shape[1]] = times
            times = grown
            noise = noise[used:]
        elif status == _kernels.GROW_PATH:
            rt = np.empty(rec_t.size * 2)
            rt[: rec_t.size] = rec_t
            rx = np.empty((K, rec_t.size * 2))
            rx[:, : rec_t.size] = rec_x
            rec_t, rec_x = rt, rx
            noise = noise[used:]
        else:
            raise FloatingPointError(
                "nonfinite state before cutoff crossing at "
                f"t={sc[0]:.6g} (level index {int(ic[2])}, state {sc[2]:.6g})"
            )

    steps = int(ic[0])
    rec_len = int(ic[1])
    logs: list[ExplosionLog] = []
    for k in range(K):
        path = None
        if numerics.record_path:
            path = _split_path(
                rec_t[:rec_len], rec_x[k, :rec_len], in_transit_at_end=active[k] == 0
            )
        logs.append(
            ExplosionLog(
                times=times[k, : counts[k]].copy(),
                horizon=numerics.horizon,
                params=per_level_params[k],
                steps_taken=steps,
                seed=seed,
                path=path,
            )
        )
    return logs


def simulate_explosions(
    params: DiffusionParams,
    numerics: NumericsConfig,
    rng_seed: int | None = None,
) -> ExplosionLog:
    """Integrate one trajectory from +infinity and log its blow-up times.

    rng_seed overrides numerics.seed when given.  The run is a pure
    function of (params, numerics, seed): identical inputs give identical
    logs regardless of internal buffer growth or noise chunking.
    """
    _, level_field, _, _ = _family_layout(params)
    seed = numerics.seed if rng_seed is None else rng_seed
    levels = np.array([getattr(params, level_field)], dtype=float)
    return _run_family([params], levels, numerics, seed)[0]


def simulate_coupled_family(
    levels: Sequence[float],
    params_template: DiffusionParams,
    numerics: NumericsConfig,
    rng_seed: int | None = None,
) -> list[ExplosionLog]:
    """Drive one trajectory per spectral level with identical increments.

    All levels share the template's family and beta and a single
    level-independent step schedule dt = dt0 / (1 + max_k x_k^2), the
    finest over the family, so schedules cannot diverge between levels.
    Logs are returned in level order.
    """
    lv = np.asarray(levels, dtype=float)
    if lv.ndim != 1 or lv.size == 0:
        raise ValueError("levels must be a nonempty one-dimensional sequence")
    if np.any(np.diff(lv) < 0):
        raise ValueError("levels must be nondecreasing")
    _, level_field, _, _ = _family_layout(params_template)
    seed = numerics.seed if rng_seed is None else rng_seed
    per_level = [
        dataclasses.replace(params_template, **{level_field: float(v)}) for v in lv
    ]
    return _run_family(per_level, lv, numerics, seed)


def occupation_time(path: PathSample, a: float) -> float:
    """Time spent at or below -sqrt(a) + (ln a)^{1/4} / a^{1/4}.

    The downside region is only defined for a > 1.  Within each recorded
    segment the left-endpoint rule is used; transit gaps contribute
    nothing.
    """
    if not a > 1.0:
        raise ValueError("occupation region requires a > 1")
    thr = -math.sqrt(a) + math.log(a) ** 0.25 / a**0.25
    if path.times.size < 2:
        return 0.0
    dtv = np.diff(path.times)
    same = path.segment_ids[1:] == path.segment_ids[:-1]
    below = path.states[:-1] <= thr
    return float(np.sum(dtv[same & below]))


def write_path_csv(path: PathSample, dest) -> None:
    """Dump a recorded path as CSV columns (t, x, exploded_flag).

    exploded_flag is 1 on the last sample of every segment that ended in a
    blow-up, otherwise 0.  dest is a filename or an open text handle.
    """
    close = False
    if isinstance(dest, (str, bytes)) or hasattr(dest, "__fspath__"):
        handle = open(dest, "w", newline="")
        close = True
    else:
        handle = dest
    try:
        handle.write("t,x,exploded_flag\n")
        n = path.times.size
        for i in range(n):
            seg = path.segment_ids[i]
            last_of_seg = i + 1 == n or path.segment_ids[i + 1] != seg
            flag = 1 if last_of_seg and path.segment_exploded[seg] else 0
            handle.write(
                f"{float(path.times[i])!r},{float(path.states[i])!r},{flag}\n")
    finally:
        if close:
            handle.close()
