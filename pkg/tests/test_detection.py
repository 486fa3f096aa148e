"""Poisson count simulation, stream splitting, and scan CSV round trips."""

import math

import numpy as np
import pytest

from wdmqkd import (
    BiphotonPureState,
    DetectionConfig,
    ProductState,
    ScanData,
    angle_stream_key,
    derive_stream,
    expected_mean,
    scan_from_csv,
    scan_to_csv,
    simulate_counts,
    simulate_scan,
)

ANGLES = tuple(float(t) for t in range(0, 181, 10))


def test_simulate_scan_deterministic():
    state = BiphotonPureState(1.0, 0.0)
    config = DetectionConfig(seed=7)
    a = simulate_scan(state, ("signal", 45.0), ANGLES, config)
    b = simulate_scan(state, ("signal", 45.0), ANGLES, config)
    assert a.counts == b.counts
    c = simulate_scan(state, ("signal", 45.0), ANGLES, DetectionConfig(seed=8))
    assert c.counts != a.counts


def test_simulate_scan_angle_permutation_invariance():
    # per-angle streams are keyed by angle value, so permuting the scanned
    # list must permute the counts and change nothing else
    state = BiphotonPureState(1.73, 0.3)
    config = DetectionConfig(seed=42)
    forward = simulate_scan(state, ("signal", 30.0), ANGLES, config)
    perm = tuple(reversed(ANGLES))
    backward = simulate_scan(state, ("signal", 30.0), perm, config)
    by_angle_f = dict(zip(forward.angles, forward.counts))
    by_angle_b = dict(zip(backward.angles, backward.counts))
    assert by_angle_f == by_angle_b


def test_simulate_scan_channels_are_independent_streams():
    state = BiphotonPureState(1.0, 0.0)
    config = DetectionConfig(seed=3)
    ch0 = simulate_scan(state, ("signal", 45.0), ANGLES, config, channel_id=0)
    ch1 = simulate_scan(state, ("signal", 45.0), ANGLES, config, channel_id=1)
    assert ch0.counts != ch1.counts


def test_simulate_scan_zero_probability_zero_background():
    # product state with signal at 135 deg never produces a coincidence
    config = DetectionConfig(seed=5, accidental_rate=0.0)
    scan = simulate_scan(ProductState(), ("signal", 135.0), ANGLES, config)
    assert all(c == 0 for c in scan.counts)


def test_simulate_scan_fixed_idler_arm():
    state = BiphotonPureState(1.0, 0.0)
    config = DetectionConfig(seed=11, pair_rate=50000.0)
    scan = simulate_scan(state, ("idler", 0.0), (90.0,), config)
    # theta_s = 90, theta_i = 0 transmits the H_s V_i term: p = 1/2
    want = 25000.0
    assert abs(scan.counts[0] - want) < 5.0 * math.sqrt(want)
    with pytest.raises(ValueError):
        simulate_scan(state, ("pump", 0.0), ANGLES, config)


def test_expected_mean_composition():
    config = DetectionConfig(
        pair_rate=1000.0,
        efficiency_signal=0.5,
        efficiency_idler=0.4,
        accidental_rate=7.0,
        integration_time=2.0,
    )
    assert expected_mean(0.5, config) == pytest.approx(2.0 * (1000.0 * 0.5 * 0.4 * 0.5 + 7.0))
    with pytest.raises(ValueError):
        expected_mean(1.5, config)
    with pytest.raises(ValueError):
        expected_mean(-0.1, config)


def test_counts_converge_to_mean():
    # z-test of the Poisson mean over many independent draws
    config = DetectionConfig(pair_rate=2000.0, seed=0)
    mean = expected_mean(0.5, config)
    rng = derive_stream(123)
    draws = np.array([simulate_counts(0.5, config, rng) for _ in range(4000)])
    z = (draws.mean() - mean) / (math.sqrt(mean) / math.sqrt(draws.size))
    assert abs(z) < 4.0


def test_angle_stream_key_quantization():
    assert angle_stream_key(0.0) == 0
    assert angle_stream_key(180.0) == 0
    assert angle_stream_key(-90.0) == 90000
    assert angle_stream_key(45.0) == angle_stream_key(405.0)
    assert angle_stream_key(10.0001) == angle_stream_key(10.0)
    assert angle_stream_key(10.001) != angle_stream_key(10.0)


def test_derive_stream_reproducible():
    a = derive_stream(9, 2, 31)
    b = derive_stream(9, 2, 31)
    assert a.integers(0, 1000, 5).tolist() == b.integers(0, 1000, 5).tolist()


def test_scan_csv_round_trip():
    state = BiphotonPureState(1.73, 0.0)
    config = DetectionConfig(seed=17, accidental_rate=3.0)
    scan = simulate_scan(state, ("signal", 45.0), ANGLES, config)
    text = scan_to_csv(scan)
    back = scan_from_csv(text)
    assert back.theta_fixed_arm == scan.theta_fixed_arm
    assert back.theta_fixed == scan.theta_fixed
    assert back.angles == scan.angles
    assert back.counts == scan.counts
    assert back.config.seed == 17
    # serialization is deterministic
    assert scan_to_csv(scan) == text


def test_scan_csv_parse_errors():
    with pytest.raises(ValueError, match="header"):
        scan_from_csv("# fixed_arm=signal\n# fixed_theta_deg=45.0\n# seed=0\nbogus\n")
    with pytest.raises(ValueError, match="line 5"):
        scan_from_csv(
            "# fixed_arm=signal\n# fixed_theta_deg=45.0\n# seed=0\n"
            "theta_deg,counts\n0.0,notanint\n"
        )
    with pytest.raises(ValueError, match="metadata"):
        scan_from_csv("theta_deg,counts\n0.0,5\n10.0,6\n")
    with pytest.raises(ValueError, match="header"):
        scan_from_csv("")


def test_scan_data_validation():
    with pytest.raises(ValueError):
        ScanData("pump", 0.0, (0.0,), (1,))
    with pytest.raises(ValueError):
        ScanData("signal", 0.0, (0.0, 10.0), (1,))
    with pytest.raises(ValueError):
        ScanData("signal", 0.0, (0.0,), (-1,))


def test_detection_config_validation():
    with pytest.raises(ValueError):
        DetectionConfig(pair_rate=-1.0)
    with pytest.raises(ValueError):
        DetectionConfig(efficiency_signal=1.5)
    with pytest.raises(ValueError):
        DetectionConfig(efficiency_idler=-0.1)
    with pytest.raises(ValueError):
        DetectionConfig(accidental_rate=-2.0)
    with pytest.raises(ValueError):
        DetectionConfig(integration_time=0.0)
    with pytest.raises(ValueError):
        DetectionConfig(seed=-1)
    with pytest.raises(ValueError):
        DetectionConfig(seed=1.5)
