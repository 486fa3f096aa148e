"""Fringe fitting: exact recovery, canonical form, uncertainty behavior."""

import math

import numpy as np
import pytest

from wdmqkd import (
    BiphotonPureState,
    DetectionConfig,
    FitResult,
    fit_result_to_dict,
    fit_scan,
    fit_sinusoid,
    scan_metrics,
    simulate_scan,
    visibility,
)

ANGLES = np.arange(0.0, 181.0, 10.0)


def fringe(theta, c, v, theta0, period=180.0):
    return c * (1.0 + v * np.cos(2.0 * np.pi * (theta - theta0) / period))


def test_noiseless_recovery_period_180():
    y = fringe(ANGLES, 500.0, 0.7, 60.0)
    fit = fit_sinusoid(ANGLES, y)
    assert fit.converged
    assert fit.c == pytest.approx(500.0, rel=1e-6)
    assert fit.v == pytest.approx(0.7, rel=1e-6)
    assert fit.theta0 == pytest.approx(60.0, rel=1e-6)
    assert fit.chi2_reduced == pytest.approx(0.0, abs=1e-12)


def test_noiseless_recovery_period_360():
    theta = np.arange(0.0, 361.0, 20.0)
    y = fringe(theta, 120.0, 0.4, 250.0, period=360.0)
    fit = fit_sinusoid(theta, y, period=360.0)
    assert fit.converged
    assert fit.c == pytest.approx(120.0, rel=1e-6)
    assert fit.v == pytest.approx(0.4, rel=1e-6)
    assert fit.theta0 == pytest.approx(250.0, rel=1e-6)


def test_noiseless_recovery_many_parameter_draws():
    rng = np.random.default_rng(41)
    for _ in range(50):
        c = rng.uniform(50.0, 5000.0)
        v = rng.uniform(0.05, 1.0)
        theta0 = rng.uniform(0.0, 180.0)
        y = fringe(ANGLES, c, v, theta0)
        fit = fit_sinusoid(ANGLES, y)
        assert fit.c == pytest.approx(c, rel=1e-6)
        assert fit.v == pytest.approx(v, rel=1e-6)
        dt = (fit.theta0 - theta0 + 90.0) % 180.0 - 90.0
        assert abs(dt) <= 1e-6 * 180.0


def test_refit_is_a_fixed_point():
    # moderate visibility keeps the fitted model strictly positive, so it can
    # be fed back in as exact data
    state = BiphotonPureState.from_degrees(1.0, 60.0)
    scan = simulate_scan(state, ("signal", 45.0), ANGLES, DetectionConfig(seed=2))
    fit1 = fit_scan(scan)
    y_model = fringe(np.asarray(scan.angles), fit1.c, fit1.v, fit1.theta0)
    fit2 = fit_sinusoid(np.asarray(scan.angles), y_model)
    assert fit2.c == pytest.approx(fit1.c, rel=1e-9)
    assert fit2.v == pytest.approx(fit1.v, rel=1e-9)
    assert fit2.theta0 == pytest.approx(fit1.theta0, rel=1e-9)


def test_canonical_form():
    # negative visibility input is folded to positive v with a half-period
    # phase shift; theta0 always lands in [0, period)
    y = fringe(ANGLES, 300.0, 0.5, 20.0)
    fit = fit_sinusoid(ANGLES, y)
    assert fit.v >= 0.0
    assert 0.0 <= fit.theta0 < 180.0
    y_flipped = fringe(ANGLES, 300.0, -0.5, 20.0)
    fit_b = fit_sinusoid(ANGLES, y_flipped)
    assert fit_b.v == pytest.approx(0.5, rel=1e-6)
    assert fit_b.theta0 == pytest.approx(110.0, rel=1e-6)


def test_noisy_fit_recovers_within_errors():
    state = BiphotonPureState(1.73, 0.0)
    config = DetectionConfig(seed=7, pair_rate=2000.0)
    scan = simulate_scan(state, ("signal", 45.0), ANGLES, config)
    fit = fit_scan(scan)
    metrics = scan_metrics(fit)
    assert fit.converged
    # true values for this state at theta_s = 45
    assert abs(metrics.theta_max - 59.97059823848534) < 4.0 * metrics.theta_max_err
    true_vis = visibility(state, 45.0)
    assert abs(metrics.visibility - true_vis) < 4.0 * metrics.visibility_err
    assert 0.2 < fit.chi2_reduced < 5.0


def test_error_bars_scale_with_counts():
    state = BiphotonPureState(1.0, 0.0)
    low = fit_scan(simulate_scan(state, ("signal", 45.0), ANGLES, DetectionConfig(seed=1, pair_rate=500.0)))
    high = fit_scan(simulate_scan(state, ("signal", 45.0), ANGLES, DetectionConfig(seed=1, pair_rate=50000.0)))
    assert high.theta0_err < low.theta0_err
    assert high.v_err < low.v_err


def test_coverage_sanity_small_batch():
    # 3-sigma interval should cover the true phase in nearly every trial;
    # with 60 trials even one miss is already unusual
    state = BiphotonPureState(1.73, 0.0)
    true_theta = 59.97059823848534
    misses = 0
    for seed in range(60):
        scan = simulate_scan(state, ("signal", 45.0), ANGLES, DetectionConfig(seed=seed))
        fit = fit_scan(scan)
        dt = (fit.theta0 - true_theta + 90.0) % 180.0 - 90.0
        if abs(dt) > 3.0 * fit.theta0_err:
            misses += 1
    assert misses <= 3


def test_constant_data_has_unidentifiable_phase():
    y = np.full(ANGLES.shape, 400.0)
    fit = fit_sinusoid(ANGLES, y)
    assert fit.v == pytest.approx(0.0, abs=1e-9)
    assert fit.theta0_err > 1e3 or math.isinf(fit.theta0_err)


def test_input_validation():
    y = fringe(ANGLES, 100.0, 0.5, 10.0)
    with pytest.raises(ValueError):
        fit_sinusoid(ANGLES, y, period=90.0)
    with pytest.raises(ValueError):
        fit_sinusoid(ANGLES[:3], y[:3])
    with pytest.raises(ValueError):
        fit_sinusoid(np.arange(0.0, 50.0, 10.0), fringe(np.arange(0.0, 50.0, 10.0), 100, 0.5, 0))
    with pytest.raises(ValueError):
        fit_sinusoid(ANGLES, -y)
    with pytest.raises(ValueError):
        fit_sinusoid(ANGLES, y[:-1])


def test_fit_result_dict_keys():
    y = fringe(ANGLES, 200.0, 0.3, 75.0)
    d = fit_result_to_dict(fit_sinusoid(ANGLES, y))
    assert sorted(d) == [
        "c",
        "c_err",
        "chi2_reduced",
        "converged",
        "period_deg",
        "theta0_deg",
        "theta0_err_deg",
        "v",
        "v_err",
    ]
    assert d["converged"] is True
    assert isinstance(d["c"], float)


def test_scan_metrics_folds_360_phase():
    theta = np.arange(0.0, 361.0, 20.0)
    y = fringe(theta, 100.0, 0.6, 250.0, period=360.0)
    fit = fit_sinusoid(theta, y, period=360.0)
    metrics = scan_metrics(fit)
    assert metrics.theta_max == pytest.approx(70.0, rel=1e-6)
