"""Small-beta spectral maps, limit laws, and density predictions.

Everything here lives on the edge of the spectrum in the beta -> 0 regime:
the affine map ell_beta(x) locating the ground state, the change of scale
between the two operator normalizations, the transform sending the
beta-indexed edge law to a standard Gumbel, limiting marginal laws of the
k-th lowest point, the right tail of the edge law at fixed beta, the
macroscopic eigenvalue density with its first correction, and an
independent Airy-function evaluator for comparison curves.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .point_process import rescale_airy
from .riccati_core import Linear, NumericsConfig, simulate_coupled_family
from .stationary_analysis import (
    DEFAULT_CONFIG,
    QuadratureConfig,
    QuadratureResult,
    flux_J0,
    flux_J0_prime,
    integrated_J0,
)
from .stat_validation import wilson_interval

_CBRT3 = 3.0 ** (1.0 / 3.0)


@dataclass(frozen=True)
class EdgeScalingMap:
    """Affine location map ell_beta(x) = center + scale * x."""

    beta: float
    center: float = field(init=False)
    scale: float = field(init=False)

    def __post_init__(self) -> None:
        if not 0.0 < self.beta < 1.0:
            raise ValueError("beta must lie in (0, 1)")
        lpi = math.log(1.0 / (self.beta * math.pi))
        l = math.log(1.0 / self.beta)
        object.__setattr__(self, "center", -((0.375 * lpi) ** (2.0 / 3.0)))
        object.__setattr__(self, "scale", 1.0 / (2.0 * _CBRT3 * l ** (1.0 / 3.0)))

    def __call__(self, x: float) -> float:
        return self.center + self.scale * x


@dataclass(frozen=True)
class DensityPoint:
    """Eigenvalue density and its running integral at one level."""

    ell: float
    density: float
    integrated: float

    def __post_init__(self) -> None:
        if self.density < 0.0:
            raise ValueError("density must be nonnegative")


def ell_beta(x: float, beta: float) -> float:
    """Edge location of the point with Gumbel coordinate x."""
    return EdgeScalingMap(beta)(x)


def ell_beta_inverse(ell: float, beta: float) -> float:
    """Gumbel coordinate of an edge location; inverse of ell_beta."""
    m = EdgeScalingMap(beta)
    return (ell - m.center) / m.scale


def scale_H_to_L(lambda_H: float, beta: float) -> float:
    """Map a level of the noise-2/sqrt(beta) operator to the unit-noise one."""
    if not beta > 0.0:
        raise ValueError("beta must be positive")
    return (0.25 * beta) ** (2.0 / 3.0) * lambda_H


def tw_gumbel_cdf_prediction(x: float) -> float:
    """Limit CDF exp(-e^{-x}) of the transformed edge law."""
    return math.exp(-math.exp(-x))


def gumbel_transform(tw_value: float, beta: float) -> float:
    """Affine change of variables under which the edge law becomes Gumbel."""
    if not 0.0 < beta < 1.0:
        raise ValueError("beta must lie in (0, 1)")
    l = math.log(1.0 / beta)
    lpi = math.log(1.0 / (beta * math.pi))
    return (
        2.0
        * _CBRT3
        * l ** (1.0 / 3.0)
        * ((0.25 * beta) ** (2.0 / 3.0) * tw_value - (0.375 * lpi) ** (2.0 / 3.0))
    )


def kth_marginal_limit_cdf(k: int, x: float) -> float:
    """Limit CDF of the k-th lowest point: 1 - e^{-e^x} sum_{i<=k} e^{ix}/i!.

    Evaluated in the log domain so large k and x do not overflow.
    """
    if k < 0 or k != int(k):
        raise ValueError("k must be a nonnegative integer")
    terms = np.array([i * x - math.lgamma(i + 1) for i in range(int(k) + 1)])
    shift = terms.max()
    lse = shift + math.log(np.exp(terms - shift).sum())
    val = 1.0 - math.exp(min(lse - math.exp(x), 0.0))
    return min(1.0, max(0.0, val))


def tw_right_tail_leading(lam: float, beta: float) -> float:
    """Log of the leading right-tail factor of the edge law at fixed beta.

    log[ Gamma(beta/2) / ((4 beta)^{beta/2} 2 pi) * lam^{-3 beta/4}
         * exp(-(2/3) beta lam^{3/2}) ], valid for lam > 0; the bounded
    power-series corrections are omitted.
    """
    if not lam > 0.0:
        raise ValueError("lam must be positive")
    if not beta > 0.0:
        raise ValueError("beta must be positive")
    return (
        math.lgamma(0.5 * beta)
        - 0.5 * beta * math.log(4.0 * beta)
        - math.log(2.0 * math.pi)
        - 0.75 * beta * math.log(lam)
        - (2.0 / 3.0) * beta * lam**1.5
    )


def macroscopic_density(
    ell: float, beta: float, config: QuadratureConfig = DEFAULT_CONFIG
) -> DensityPoint:
    """Eigenvalue density 4 J0(ell)/beta and its integral up to ell.

    J0 at level ell is the stationary flux of the well with parameter
    -ell, so the density decays like (4/(pi beta)) |ell|^{1/2}
    exp(-(8/3)|ell|^{3/2}) far below the edge and grows like
    (4/(pi beta)) ell^{1/2} in the bulk.
    """
    if not 0.0 < beta < 1.0:
        raise ValueError("beta must lie in (0, 1)")
    dens = 4.0 / beta * flux_J0(-ell, config).value
    integ = 4.0 / beta * integrated_J0(ell, config).value
    return DensityPoint(ell=ell, density=dens, integrated=integ)


def gamma1_tail(ell: float) -> float:
    """Deep-edge asymptotic of the first density correction.

    -(3/pi) ln|ell| e^{-4 |ell|^{3/2}}, the leading behavior of the
    correction integral as ell -> -infinity.
    """
    if not ell < 0.0:
        raise ValueError("tail form requires ell < 0")
    a = abs(ell)
    return -(3.0 / math.pi) * math.log(a) * math.exp(-4.0 * a**1.5)


_GAMMA1_LAMBDA_NODES = 32
_GAMMA1_X3_NODES = 48
_GAMMA1_SPAN = 4.6
_GAMMA1_X3_RANGE = 8.0


def gamma1_correction(
    ell: float,
    n_samples: int = 200_000,
    rng_seed: int = 0,
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> QuadratureResult:
    """Monte Carlo estimate of the first correction to the edge density.

    The correction is an integral over levels lam <= ell of two
    four-dimensional integrals concentrated, after the rescaling by
    |lam|^{3/4} and |lam|^{3/2}, around the saddle z ~ 1, u ~ v, w ~ -1:
    u = v sits anywhere on the ridge [-1, 1] while z, w, and u - v carry
    Gaussian fluctuations of width |lam|^{-3/4} (resp. |lam|^{-3/2}).
    Sampling happens in the rescaled coordinates: the two Gaussian-weighted
    directions use normal proposals of width |lam|^{-3/4} in the original
    variables, the ridge coordinate is sampled uniformly on its admissible
    interval, and the ordered coordinate u - v is integrated by quadrature
    for every sample.  The ridge coordinate is confined to [-1, 1]: the
    expansion is valid only there, and continuing the expanded integrand
    past the ridge endpoints makes the integral divergent (the Gaussian
    z-weight is cancelled beyond u = 1).  The ordering constraint v >= w
    is kept exactly.

    Returns value, log|value|, and the Monte Carlo standard error as the
    error estimate; warns when the relative error exceeds 25%.
    """
    if not ell < 0.0:
        raise ValueError("the correction integral is implemented for ell < 0")
    if n_samples < 1000:
        raise ValueError("n_samples too small for a meaningful error bar")

    # Outer level integral in s = |lam|^{3/2}, where the decay e^{-4s} is
    # uniform; 4.6 units of s cover all but e^{-18.4} of the mass.
    s_lo = abs(ell) ** 1.5
    gl_x, gl_w = np.polynomial.legendre.leggauss(_GAMMA1_LAMBDA_NODES)
    s_nodes = s_lo + 0.5 * _GAMMA1_SPAN * (gl_x + 1.0)
    s_weights = 0.5 * _GAMMA1_SPAN * gl_w
    lam_weights = s_weights * (2.0 / 3.0) * s_nodes ** (-1.0 / 3.0)

    q_x, q_w = np.polynomial.legendre.leggauss(_GAMMA1_X3_NODES)
    q_nodes = 0.5 * (q_x + 1.0)
    q_weights = 0.5 * q_w

    rng = np.random.Generator(np.random.Philox(key=rng_seed))
    sigma = math.sqrt(0.5)
    x1 = sigma * rng.standard_normal(n_samples)
    x4 = sigma * rng.standard_normal(n_samples)
    u01 = rng.random(n_samples)

    gamma_s = np.zeros(n_samples)
    for j in range(_GAMMA1_LAMBDA_NODES):
        s = float(s_nodes[j])
        A = s ** (2.0 / 3.0)
        a34 = A ** (-0.75)
        a32 = A ** (-1.5)
        j0 = flux_J0(A, config).value
        j0p = flux_J0_prime(A, config).value
        e4 = math.exp((4.0 / 3.0) * s)
        # Ridge clamp: u in [-1, 1]; the v >= w ordering then bounds u - v.
        base = -1.0 + np.maximum(x4, 0.0) * a34
        hi = 1.0 + np.minimum(x1, 0.0) * a34
        span = np.maximum(hi - base, 0.0)
        x2 = base + span * u01
        # u - v range also bounded to the scale where the Gaussian factor
        # in the exponent still decays; beyond it nothing survives.
        cap = np.minimum((x2 - base) / a32, _GAMMA1_X3_RANGE * A**0.75)
        r = x2 * x2 - 1.0
        s2 = x2 * a32
        g_inner = np.zeros(n_samples)
        for q, wq in zip(q_nodes, q_weights):
            x3 = cap * q
            g_inner += wq * np.exp(r * x3 - s2 * x3 * x3)
        g_inner *= cap
        coef = 4.0 * j0p * j0 / A - 8.0 * j0 * j0 * (x2 + 1.0) / math.sqrt(A)
        f_sj = math.pi * span * g_inner * coef * e4
        gamma_s += lam_weights[j] * f_sj

    value = float(gamma_s.mean())
    stderr = float(gamma_s.std(ddof=1) / math.sqrt(n_samples))
    if stderr > 0.25 * abs(value):
        warnings.warn(
            "first-correction Monte Carlo variance above target; "
            "error bar inflated",
            RuntimeWarning,
            stacklevel=2,
        )
    log_value = math.log(abs(value)) if value != 0.0 else -math.inf
    return QuadratureResult(
        value=value,
        log_value=log_value,
        abs_error_estimate=stderr,
        used_log_domain=False,
    )


_AI0 = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)
_AIP0 = -(3.0 ** (-1.0 / 3.0)) / math.gamma(1.0 / 3.0)
_SERIES_EDGE = 8.0
_RANGE_EDGE = 15.0


def _ai_series(x: float) -> tuple[float, float]:
    """Maclaurin evaluation of (Ai, Ai') for moderate |x|."""
    x3 = x * x * x
    f = 1.0
    fp = 0.0
    g = x
    gp = 1.0
    tf = 1.0
    tfp = 0.5 * x * x
    fp = tfp
    tg = x
    tgp = 1.0
    for k in range(1, 80):
        tk = 3.0 * k
        tf *= x3 / (tk * (tk - 1.0))
        tg *= x3 / ((tk + 1.0) * tk)
        tgp *= x3 / (tk * (tk - 2.0))
        f += tf
        g += tg
        gp += tgp
        if k > 1:
            tfp *= x3 / ((tk - 1.0) * (tk - 3.0))
            fp += tfp
        if (
            abs(tf) + abs(tg) + abs(tfp) + abs(tgp)
            < 1e-18 * (abs(f) + abs(g) + 1.0)
        ):
            break
    ai = _AI0 * f + _AIP0 * g
    aip = _AI0 * fp + _AIP0 * gp
    return ai, aip


def _asymptotic_uv(n: int) -> tuple[np.ndarray, np.ndarray]:
    u = np.empty(n + 1)
    v = np.empty(n + 1)
    u[0] = 1.0
    v[0] = 1.0
    for k in range(1, n + 1):
        u[k] = u[k - 1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / (216.0 * k * (2 * k - 1))
        v[k] = u[k] * (6 * k + 1) / (1.0 - 6 * k)
    return u, v


_U_COEF, _V_COEF = _asymptotic_uv(10)


def _ai_asymptotic_pos(x: float) -> tuple[float, float]:
    zeta = (2.0 / 3.0) * x**1.5
    su = 0.0
    sv = 0.0
    sign = 1.0
    for k in range(11):
        zk = zeta**k
        su += sign * _U_COEF[k] / zk
        sv += sign * _V_COEF[k] / zk
        sign = -sign
    pref = math.exp(-zeta) / (2.0 * math.sqrt(math.pi))
    ai = pref * x**-0.25 * su
    aip = -pref * x**0.25 * sv
    return ai, aip


def _ai_asymptotic_neg(x: float) -> tuple[float, float]:
    t = -x
    zeta = (2.0 / 3.0) * t**1.5
    phase = zeta - 0.25 * math.pi
    even_u = 0.0
    odd_u = 0.0
    even_v = 0.0
    odd_v = 0.0
    sign = 1.0
    for k in range(0, 11, 2):
        zk = zeta**k
        even_u += sign * _U_COEF[k] / zk
        even_v += sign * _V_COEF[k] / zk
        if k + 1 <= 10:
            zk1 = zeta ** (k + 1)
            odd_u += sign * _U_COEF[k + 1] / zk1
            odd_v += sign * _V_COEF[k + 1] / zk1
        sign = -sign
    sp = math.sqrt(math.pi)
    ai = t**-0.25 / sp * (math.cos(phase) * even_u + math.sin(phase) * odd_u)
    aip = t**0.25 / sp * (math.sin(phase) * even_v - math.cos(phase) * odd_v)
    return ai, aip


def _ai_pair(x: float) -> tuple[float, float]:
    if abs(x) > _RANGE_EDGE:
        raise ValueError(f"|x| <= {_RANGE_EDGE:g} is the validated range")
    if abs(x) <= _SERIES_EDGE:
        return _ai_series(x)
    if x > 0:
        return _ai_asymptotic_pos(x)
    return _ai_asymptotic_neg(x)


def airy_ai(x: float) -> float:
    """First Airy function, series for moderate x and asymptotics beyond."""
    return _ai_pair(x)[0]


def airy_ai_prime(x: float) -> float:
    """Derivative of the first Airy function."""
    return _ai_pair(x)[1]


def airy_kernel_density(x: float) -> float:
    """Edge eigenvalue density Ai'(x)^2 - x Ai(x)^2 of the reference kernel."""
    ai, aip = _ai_pair(x)
    return aip * aip - x * ai * ai


@dataclass(frozen=True)
class CdfEstimate:
    """Monte Carlo estimate of one CDF value with a confidence interval."""

    x: float
    ell: float
    estimate: float
    ci_low: float
    ci_high: float
    n: int


def physical_horizon(beta: float, t_resc: float = 8.0) -> float:
    """Physical horizon realizing a rescaled-time horizon t_resc."""
    if not 0.0 < beta < 1.0:
        raise ValueError("beta must lie in (0, 1)")
    return t_resc / (beta * (0.375 * math.log(1.0 / beta)) ** (1.0 / 3.0))


def edge_explosion_ensemble(
    beta: float,
    x_grid: Sequence[float],
    n_samples: int,
    numerics: NumericsConfig,
    threads: int = 1,
) -> list[list[np.ndarray]]:
    """Rescaled explosion times of coupled slow-ramp runs at each x.

    Returns out[ix][replica] = rescaled points of replica `replica` at
    level ell_beta(x_grid[ix]).  Replica i uses seed numerics.seed + i;
    all levels inside one replica share the Brownian path.  With
    threads > 1 the replicas run on a thread pool; results are identical
    to the sequential order.
    """
    xs = np.asarray(x_grid, dtype=float)
    if xs.ndim != 1 or xs.size == 0 or np.any(np.diff(xs) < 0):
        raise ValueError("x_grid must be a nondecreasing nonempty sequence")
    levels = [ell_beta(float(x), beta) for x in xs]
    template = Linear(ell=0.0, beta=beta)

    def one(i: int) -> list[np.ndarray]:
        logs = simulate_coupled_family(levels, template, numerics, rng_seed=numerics.seed + i)
        return [rescale_airy(lg, beta).points for lg in logs]

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_rep = list(pool.map(one, range(n_samples)))
    else:
        per_rep = [one(i) for i in range(n_samples)]
    return [[per_rep[i][ix] for i in range(n_samples)] for ix in range(xs.size)]


def estimate_tw_cdf(
    beta: float,
    x_grid: Sequence[float],
    n_samples: int,
    numerics: NumericsConfig,
    k: int = 0,
    level: float = 0.95,
    threads: int = 1,
) -> list[CdfEstimate]:
    """Estimate P[at least k+1 explosions] at each edge location ell_beta(x).

    This is the empirical CDF of the (k-th lowest) edge point.  The finite
    horizon must satisfy the bias rule: the neglected intensity mass
    e^{x_max} e^{-T_resc} has to stay below half the binomial standard
    error 1/(2 sqrt(n)), otherwise the config is rejected.
    """
    if not 0.0 < beta < 1.0:
        raise ValueError("beta must lie in (0, 1)")
    if k < 0:
        raise ValueError("k must be nonnegative")
    xs = np.asarray(x_grid, dtype=float)
    t_resc = numerics.horizon * beta * (0.375 * math.log(1.0 / beta)) ** (1.0 / 3.0)
    bias = math.exp(float(xs.max()) - t_resc)
    if bias > 0.5 / math.sqrt(n_samples):
        raise ValueError(
            f"horizon too small: neglected mass {bias:.2e} exceeds half the "
            f"sampling error {0.5 / math.sqrt(n_samples):.2e}; raise horizon"
        )
    ens = edge_explosion_ensemble(beta, xs, n_samples, numerics, threads=threads)
    out = []
    for ix, x in enumerate(xs):
        hits = sum(1 for pts in ens[ix] if pts.size >= k + 1)
        lo, hi = wilson_interval(hits, n_samples, level)
        out.append(
            CdfEstimate(
                x=float(x),
                ell=ell_beta(float(x), beta),
                estimate=hits / n_samples,
                ci_low=lo,
                ci_high=hi,
                n=n_samples,
            )
        )
    return out
