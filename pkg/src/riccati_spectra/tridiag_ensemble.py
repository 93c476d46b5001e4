"""Tridiagonal beta-ensemble sampling and extreme-eigenvalue statistics.

Samples the symmetric tridiagonal random matrices whose eigenvalue law is
the Gaussian beta-ensemble at inverse temperature beta_N, locates the top
eigenvalues by Sturm-sequence bisection (no dense solver), applies the
soft-edge rescaling, and evaluates the Gumbel law predicted for the
rescaled maximum when beta_N -> 0 with N beta_N -> infinity.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from numba import njit

__all__ = [
    "TridiagMatrix",
    "EnsembleParams",
    "sample_matrix",
    "sturm_count",
    "top_k_eigenvalues",
    "edge_rescale",
    "gumbel_center_scale",
    "gumbel_prediction",
]


@dataclass(frozen=True)
class TridiagMatrix:
    """Symmetric tridiagonal matrix: diagonal and nonnegative off-diagonal."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self) -> None:
        diag = np.asarray(self.diag, dtype=np.float64)
        off = np.asarray(self.offdiag, dtype=np.float64)
        if diag.ndim != 1 or diag.size < 1:
            raise ValueError("diag must be a nonempty 1-d sequence")
        if off.shape != (diag.size - 1,):
            raise ValueError(
                f"offdiag must have length {diag.size - 1}, got {off.shape}"
            )
        if not np.all(np.isfinite(diag)) or not np.all(np.isfinite(off)):
            raise ValueError("matrix entries must be finite")
        if off.size and not np.all(off >= 0.0):
            raise ValueError("offdiag entries must be nonnegative")
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "offdiag", off)

    @property
    def n(self) -> int:
        return self.diag.size


@dataclass(frozen=True)
class EnsembleParams:
    """Matrix size and inverse temperature of the ensemble."""

    n: int
    beta_n: float

    def __post_init__(self) -> None:
        if not isinstance(self.n, (int, np.integer)) or self.n < 2:
            raise ValueError(f"n must be an integer >= 2, got {self.n}")
        if not (self.beta_n > 0.0 and math.isfinite(self.beta_n * self.n)):
            raise ValueError("beta_n must be positive with finite n*beta_n")
        if self.n * self.beta_n < 10.0:
            warnings.warn(
                f"n*beta_n = {self.n * self.beta_n:.3g} < 10: the joint "
                "limit underlying the edge prediction is poorly satisfied",
                RuntimeWarning,
                stacklevel=2,
            )


def sample_matrix(params: EnsembleParams, seed: int) -> TridiagMatrix:
    """Draw one matrix: diag_i = sqrt(2) g_i, offdiag_k = chi_{(n-k) beta_n}.

    The chi entry with m degrees of freedom is realized as the square root
    of a Gamma(shape m/2, scale 2) variate, which is valid for arbitrarily
    small positive shape and has E[chi^2] = m.
    """
    rng = np.random.Generator(np.random.Philox(key=seed))
    diag = math.sqrt(2.0) * rng.standard_normal(params.n)
    m = (params.n - np.arange(1, params.n)) * params.beta_n
    offdiag = np.sqrt(rng.gamma(shape=0.5 * m, scale=2.0))
    return TridiagMatrix(diag=diag, offdiag=offdiag)


@njit(cache=True, nogil=True)
def _sturm_negcount(diag: np.ndarray, off2: np.ndarray, x: float) -> int:
    # Leading-minor signs carried as successive pivot ratios (the standard
    # rescaling of the raw minor recurrence, immune to under/overflow); a
    # vanishing pivot is nudged to the smallest normal magnitude.
    tiny = 2.2250738585072014e-308
    count = 0
    d = diag[0] - x
    if d < 0.0:
        count += 1
    for i in range(1, diag.shape[0]):
        if d == 0.0:
            d = tiny
        d = (diag[i] - x) - off2[i - 1] / d
        if d < 0.0:
            count += 1
    return count


def sturm_count(matrix: TridiagMatrix, x: float) -> int:
    """Number of eigenvalues strictly below x."""
    off2 = matrix.offdiag * matrix.offdiag
    return int(_sturm_negcount(matrix.diag, off2, float(x)))


def _gershgorin_bounds(matrix: TridiagMatrix) -> tuple[float, float]:
    n = matrix.n
    radius = np.zeros(n)
    if n > 1:
        radius[:-1] += matrix.offdiag
        radius[1:] += matrix.offdiag
    lo = float(np.min(matrix.diag - radius))
    hi = float(np.max(matrix.diag + radius))
    return lo, hi


@njit(cache=True, nogil=True)
def _bisect_kth(diag: np.ndarray, off2: np.ndarray, m: int,
                lo: float, hi: float, tol: float) -> float:
    # smallest x with at least m eigenvalues below x, i.e. the m-th
    # smallest eigenvalue (1-indexed)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _sturm_negcount(diag, off2, mid) >= m:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def top_k_eigenvalues(matrix: TridiagMatrix, k: int) -> np.ndarray:
    """The k largest eigenvalues, decreasing, by Sturm bisection.

    Bracketed by the Gershgorin bounds and resolved to an absolute
    tolerance of 1e-10 times the Gershgorin diameter (scale-free).
    """
    n = matrix.n
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    lo, hi = _gershgorin_bounds(matrix)
    tol = 1e-10 * max(hi - lo, 1e-300)
    off2 = matrix.offdiag * matrix.offdiag
    out = np.empty(k)
    upper = hi
    for j in range(k):
        lam = _bisect_kth(matrix.diag, off2, n - j, lo, upper, tol)
        out[j] = lam
        upper = lam + tol
    return out


def edge_rescale(lambda0: float, n: int, beta_n: float) -> float:
    """Soft-edge rescaling (n b)^{2/3} (lambda0 (n b)^{-1/2} - 2)."""
    nb = n * beta_n
    if not nb > 0.0:
        raise ValueError("n*beta_n must be positive")
    return nb ** (2.0 / 3.0) * (lambda0 / math.sqrt(nb) - 2.0)


def gumbel_center_scale(beta_n: float) -> tuple[float, float]:
    """Center and scale of the rescaled-maximum Gumbel law at beta_n."""
    if not 0.0 < beta_n < 1.0 / math.pi:
        raise ValueError("beta_n must lie in (0, 1/pi) for the edge law")
    log_term = math.log(1.0 / (math.pi * beta_n))
    center = 1.5 ** (2.0 / 3.0) * log_term ** (2.0 / 3.0)
    scale = (2.0 / 3.0) ** (1.0 / 3.0) * log_term ** (-1.0 / 3.0)
    return center, scale


def gumbel_prediction(beta_n: float, x):
    """Predicted CDF at x of the edge-rescaled top eigenvalue.

    Accepts a scalar or an array of evaluation points.
    """
    center, scale = gumbel_center_scale(beta_n)
    return np.exp(-np.exp(-(np.asarray(x, dtype=float) - center) / scale))[()]
