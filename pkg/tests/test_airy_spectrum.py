"""Spectral maps, limit laws, density correction, and the Airy evaluator."""

import math

import numpy as np
import pytest
from scipy import optimize, special

from riccati_spectra.airy_spectrum import (
    EdgeScalingMap,
    airy_ai,
    airy_ai_prime,
    airy_kernel_density,
    ell_beta,
    ell_beta_inverse,
    estimate_tw_cdf,
    gamma1_correction,
    gamma1_tail,
    gumbel_transform,
    kth_marginal_limit_cdf,
    macroscopic_density,
    physical_horizon,
    scale_H_to_L,
    tw_gumbel_cdf_prediction,
    tw_right_tail_leading,
)
from riccati_spectra.riccati_core import NumericsConfig


def test_edge_scaling_map_values():
    m = EdgeScalingMap(beta=0.01)
    assert m.center == pytest.approx(-1.1897, abs=1e-4)
    assert m.scale == pytest.approx(0.20838, abs=1e-4)
    assert ell_beta(0.0, 0.01) == m.center
    assert ell_beta(1.0, 0.01) == pytest.approx(-0.98134, abs=1e-4)


def test_edge_scaling_map_validation():
    for bad in (0.0, 1.0, 2.0, -0.5):
        with pytest.raises(ValueError):
            EdgeScalingMap(beta=bad)


def test_ell_beta_round_trip():
    for beta in (1e-4, 1e-2, 0.5):
        for x in (-3.0, 0.0, 0.7, 2.5):
            back = ell_beta_inverse(ell_beta(x, beta), beta)
            assert back == pytest.approx(x, abs=1e-12)


def test_scale_h_to_l():
    for lam in (-2.0, 0.0, 1.0, 7.5):
        assert scale_H_to_L(lam, 4.0) == lam
    assert scale_H_to_L(1.0, 0.04) == pytest.approx(0.01 ** (2.0 / 3.0), rel=1e-12)
    assert scale_H_to_L(2.0, 0.3) == pytest.approx(2.0 * scale_H_to_L(1.0, 0.3), rel=1e-12)


def test_gumbel_prediction_closed_form():
    assert tw_gumbel_cdf_prediction(0.0) == pytest.approx(math.exp(-1.0), rel=1e-15)
    xs = np.linspace(-4.0, 4.0, 17)
    vals = [tw_gumbel_cdf_prediction(x) for x in xs]
    assert all(0.0 <= v <= 1.0 for v in vals)
    assert all(v2 > v1 for v1, v2 in zip(vals, vals[1:]))


def test_gumbel_transform_affine():
    beta = 0.01
    f = lambda t: gumbel_transform(t, beta)
    slope = f(1.0) - f(0.0)
    for tw in (-10.0, 3.0, 42.0):
        assert f(tw) == pytest.approx(f(0.0) + slope * tw, rel=1e-12)


def test_transform_and_spectral_map_mirror_consistent():
    # the spectrum minimum is minus the edge variable: mapping an edge level
    # through scale_H_to_L and inverting ell_beta must equal the negated
    # transform of the negated value
    for beta in (1e-4, 1e-2):
        for tw in (-50.0, -1.0, 0.0, 2.0, 123.0):
            via_map = ell_beta_inverse(scale_H_to_L(tw, beta), beta)
            via_transform = -gumbel_transform(-tw, beta)
            assert abs(via_map - via_transform) < 1e-12


def test_kth_marginal_values():
    assert kth_marginal_limit_cdf(0, 0.0) == pytest.approx(1.0 - math.exp(-1.0), rel=1e-12)
    assert kth_marginal_limit_cdf(1, 0.0) == pytest.approx(1.0 - 2.0 * math.exp(-1.0), rel=1e-12)
    for k in range(4):
        expect = 1.0 - math.exp(-math.exp(0.5)) * sum(
            math.exp(0.5 * i) / math.factorial(i) for i in range(k + 1))
        assert kth_marginal_limit_cdf(k, 0.5) == pytest.approx(expect, rel=1e-12)


def test_kth_marginal_monotonicity():
    xs = np.linspace(-5.0, 5.0, 21)
    for k in (0, 1, 3):
        vals = [kth_marginal_limit_cdf(k, x) for x in xs]
        assert all(v2 >= v1 for v1, v2 in zip(vals, vals[1:]))
    for x in (-1.0, 0.0, 2.0):
        byk = [kth_marginal_limit_cdf(k, x) for k in range(5)]
        assert all(v2 < v1 for v1, v2 in zip(byk, byk[1:]))
    with pytest.raises(ValueError):
        kth_marginal_limit_cdf(-1, 0.0)


def test_tw_right_tail_decreasing():
    vals = [tw_right_tail_leading(lam, 1.0) for lam in (1.0, 5.0, 10.0, 50.0)]
    assert all(v2 < v1 for v1, v2 in zip(vals, vals[1:]))
    with pytest.raises(ValueError):
        tw_right_tail_leading(0.0, 1.0)


def test_tw_right_tail_log_ratio():
    d = tw_right_tail_leading(20.0, 1.0) - tw_right_tail_leading(10.0, 1.0)
    expect = -(2.0 / 3.0) * (20.0 ** 1.5 - 10.0 ** 1.5) - 0.75 * math.log(2.0)
    assert d == pytest.approx(expect, rel=1e-12)


def test_tw_right_tail_half_level_near_edge_center():
    # the level where the tail reaches 1/2, pushed through the spectral
    # scaling, sits an O(1) number of scale units from -center
    beta = 1e-4
    root = optimize.brentq(
        lambda lam: tw_right_tail_leading(lam, beta) - math.log(0.5), 1.0, 1e6)
    x_star = ell_beta_inverse(-scale_H_to_L(root, beta), beta)
    assert abs(x_star) < 3.0


def test_macroscopic_density_frozen_point():
    dp = macroscopic_density(-2.0, 1e-3)
    assert dp.density == pytest.approx(0.913181078495274, rel=1e-9)
    assert dp.integrated == pytest.approx(0.1623463368402965, rel=1e-9)


def test_macroscopic_density_deep_tail():
    beta = 1e-3
    dp = macroscopic_density(-3.0, beta)
    tail = 4.0 / (math.pi * beta) * math.sqrt(3.0) * math.exp(-(8.0 / 3.0) * 3.0 ** 1.5)
    assert dp.density / tail == pytest.approx(1.0, abs=0.03)


def test_macroscopic_density_bulk():
    beta = 1e-3
    dp = macroscopic_density(4.0, beta)
    bulk = 4.0 / (math.pi * beta) * math.sqrt(4.0)
    assert dp.density / bulk == pytest.approx(1.0, abs=0.05)


def test_macroscopic_density_monotone_section():
    ells = np.linspace(-1.0, 4.0, 11)
    pts = [macroscopic_density(float(e), 1e-3) for e in ells]
    assert all(p.density >= 0.0 for p in pts)
    assert all(p2.density > p1.density for p1, p2 in zip(pts, pts[1:]))
    assert all(p2.integrated > p1.integrated for p1, p2 in zip(pts, pts[1:]))


def test_macroscopic_integrated_is_running_integral():
    beta, h = 1e-3, 1e-3
    for ell in (-1.5, 0.0):
        fd = (macroscopic_density(ell + h, beta).integrated
              - macroscopic_density(ell - h, beta).integrated) / (2.0 * h)
        assert fd == pytest.approx(macroscopic_density(ell, beta).density, rel=1e-5)


def test_gamma1_tail_values():
    expect = -(3.0 / math.pi) * math.log(2.0) * math.exp(-4.0 * 2.0 ** 1.5)
    assert gamma1_tail(-2.0) == pytest.approx(expect, rel=1e-12)
    assert gamma1_tail(-2.0) == pytest.approx(-8.1e-6, abs=5e-8)
    with pytest.raises(ValueError):
        gamma1_tail(1.0)


def test_gamma1_correction_against_tail():
    got = gamma1_correction(-2.5, n_samples=2000, rng_seed=7)
    tail = gamma1_tail(-2.5)
    assert got.value == pytest.approx(-2.781708009753963e-07, rel=1e-9)
    assert got.value < 0.0 and tail < 0.0
    assert 0.3 <= got.value / tail <= 3.0
    assert got.abs_error_estimate < 0.05 * abs(got.value)


def test_gamma1_correction_validation():
    with pytest.raises(ValueError):
        gamma1_correction(1.0)
    with pytest.raises(ValueError):
        gamma1_correction(-2.0, n_samples=10)


def test_airy_against_scipy():
    xs = np.linspace(-10.0, 5.0, 301)
    ai, aip, _, _ = special.airy(xs)
    for x, a, ap in zip(xs, ai, aip):
        assert airy_ai(float(x)) == pytest.approx(float(a), abs=1e-8)
        assert airy_ai_prime(float(x)) == pytest.approx(float(ap), abs=1e-8)


def test_airy_special_values():
    assert airy_ai(0.0) == pytest.approx(0.3550280538878172, rel=1e-12)
    assert airy_ai_prime(0.0) == pytest.approx(-0.2588194037928068, rel=1e-12)


def test_airy_differential_relation():
    h = 1e-3
    for x in np.linspace(-5.0, 5.0, 41):
        second = (airy_ai(x + h) - 2.0 * airy_ai(x) + airy_ai(x - h)) / (h * h)
        assert abs(second - x * airy_ai(x)) < 1e-6


def test_airy_range_guard():
    with pytest.raises(ValueError):
        airy_ai(15.5)
    with pytest.raises(ValueError):
        airy_ai_prime(-16.0)


def test_airy_kernel_density():
    assert airy_kernel_density(0.0) == pytest.approx(airy_ai_prime(0.0) ** 2, rel=1e-12)
    assert airy_kernel_density(-2.0) == pytest.approx(0.4856724935310844, rel=1e-9)
    assert airy_kernel_density(3.0) >= 0.0


def test_physical_horizon():
    beta = 1e-4
    expect = 8.0 / (beta * (0.375 * math.log(1.0 / beta)) ** (1.0 / 3.0))
    assert physical_horizon(beta) == pytest.approx(expect, rel=1e-12)
    assert physical_horizon(beta, t_resc=4.0) == pytest.approx(0.5 * expect, rel=1e-12)


def test_estimate_tw_cdf_rejects_short_horizon():
    with pytest.raises(ValueError, match="horizon too small"):
        estimate_tw_cdf(1e-4, [0.0], 10, NumericsConfig(horizon=10.0))


def test_estimate_tw_cdf_smoke():
    """Coupled estimates are monotone in x with sane confidence intervals."""
    beta = 0.05
    res = estimate_tw_cdf(
        beta, [-1.0, 0.0, 1.0], 40, NumericsConfig(horizon=physical_horizon(beta)))
    assert [r.x for r in res] == [-1.0, 0.0, 1.0]
    for r in res:
        assert 0.0 <= r.ci_low <= r.estimate <= r.ci_high <= 1.0
        assert r.n == 40
    assert res[0].estimate <= res[1].estimate <= res[2].estimate
