"""Counting statistics for polarizer-scan measurements.

Each scan point is an independent Poisson draw whose mean is the detected
coincidence rate times the integration time,

    mean = T * (pair_rate * eff_s * eff_i * p + accidental_rate),

with p the coincidence probability at the analyzer angles.  Random streams
are split per (seed, channel, angle) so results never depend on evaluation
order: the angle enters the split as its value reduced mod 180 deg and
quantized to millidegrees, which means permuting the scanned angle list
simply permutes the counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .biphoton import (
    BiphotonPureState,
    MeasurementSetting,
    ProductState,
    coincidence_probability,
    normalize_angle_deg,
)

__all__ = [
    "DetectionConfig",
    "ScanData",
    "derive_stream",
    "angle_stream_key",
    "expected_mean",
    "simulate_counts",
    "simulate_scan",
    "scan_to_csv",
    "scan_from_csv",
]

SCAN_ARMS = ("signal", "idler")


@dataclass(frozen=True)
class DetectionConfig:
    """Detector and source-rate parameters of a coincidence measurement.

    Attributes:
        pair_rate: Detected pair rate at unit coincidence probability, 1/s.
        efficiency_signal: Signal-arm detection efficiency in [0, 1].
        efficiency_idler: Idler-arm detection efficiency in [0, 1].
        accidental_rate: Angle-independent background coincidence rate, 1/s.
        integration_time: Counting time per scan point, s.
        seed: Master seed of the per-point random streams.
    """

    pair_rate: float = 2000.0
    efficiency_signal: float = 1.0
    efficiency_idler: float = 1.0
    accidental_rate: float = 0.0
    integration_time: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.pair_rate < 0.0:
            raise ValueError(f"pair_rate must be >= 0, got {self.pair_rate}")
        for name in ("efficiency_signal", "efficiency_idler"):
            eff = getattr(self, name)
            if not 0.0 <= eff <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {eff}")
        if self.accidental_rate < 0.0:
            raise ValueError(f"accidental_rate must be >= 0, got {self.accidental_rate}")
        if not self.integration_time > 0.0:
            raise ValueError(f"integration_time must be > 0, got {self.integration_time}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ValueError(f"seed must be a non-negative integer, got {self.seed}")
        object.__setattr__(self, "seed", int(self.seed))


@dataclass(frozen=True)
class ScanData:
    """Simulated (or parsed) counts of one polarizer scan.

    Attributes:
        theta_fixed_arm: Which arm is held fixed, 'signal' or 'idler'.
        theta_fixed: Fixed-arm polarizer angle, degrees.
        angles: Scanned angles of the other arm, degrees, as given.
        counts: Coincidence counts per angle, non-negative integers.
        config: Detection parameters the counts were drawn with.
    """

    theta_fixed_arm: str
    theta_fixed: float
    angles: tuple[float, ...]
    counts: tuple[int, ...]
    config: DetectionConfig = field(default_factory=DetectionConfig)

    def __post_init__(self) -> None:
        if self.theta_fixed_arm not in SCAN_ARMS:
            raise ValueError(
                f"theta_fixed_arm must be one of {SCAN_ARMS}, got {self.theta_fixed_arm!r}"
            )
        if len(self.angles) != len(self.counts):
            raise ValueError("angles and counts differ in length")
        if any(c < 0 for c in self.counts):
            raise ValueError("counts must be >= 0")
        object.__setattr__(self, "angles", tuple(float(a) for a in self.angles))
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))


def angle_stream_key(theta_deg: float) -> int:
    """Integer stream key of a scan angle: millidegrees in [0, 180000)."""
    return int(round(normalize_angle_deg(theta_deg) * 1000.0)) % 180000


def derive_stream(seed: int, channel_id: int = 0, angle_key: int = 0) -> np.random.Generator:
    """Independent random stream for one (channel, angle) cell of a run."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(channel_id), int(angle_key)]))


def expected_mean(p: float, config: DetectionConfig) -> float:
    """Poisson mean of one scan point at coincidence probability p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"coincidence probability must be in [0, 1], got {p}")
    return config.integration_time * (
        config.pair_rate * config.efficiency_signal * config.efficiency_idler * p
        + config.accidental_rate
    )


def simulate_counts(p: float, config: DetectionConfig, rng: np.random.Generator) -> int:
    """One Poisson draw of the coincidence counts at probability p."""
    return int(rng.poisson(expected_mean(p, config)))


def simulate_scan(
    state: BiphotonPureState | ProductState,
    fixed: tuple[str, float],
    angles,
    config: DetectionConfig,
    channel_id: int = 0,
) -> ScanData:
    """Simulate a full polarizer scan of one arm.

    Args:
        state: Pair state the coincidence probabilities come from.
        fixed: (arm, angle_deg) of the held polarizer; arm is 'signal' or
            'idler' and the other arm is scanned.
        angles: Scanned angles in degrees, any order.  Each angle gets its
            own random stream, so the same angle always receives the same
            draw under a given (seed, channel_id).
        config: Detection parameters, including the master seed.
        channel_id: Spectral channel index mixed into the stream split.

    Returns:
        ScanData with one integer count per input angle.
    """
    arm, fixed_theta = fixed
    if arm not in SCAN_ARMS:
        raise ValueError(f"fixed arm must be one of {SCAN_ARMS}, got {arm!r}")
    counts = []
    for theta in angles:
        if arm == "signal":
            setting = MeasurementSetting(theta_s=fixed_theta, theta_i=theta)
        else:
            setting = MeasurementSetting(theta_s=theta, theta_i=fixed_theta)
        p = coincidence_probability(state, setting)
        rng = derive_stream(config.seed, channel_id, angle_stream_key(theta))
        counts.append(simulate_counts(p, config, rng))
    return ScanData(
        theta_fixed_arm=arm,
        theta_fixed=float(fixed_theta),
        angles=tuple(float(a) for a in angles),
        counts=tuple(counts),
        config=config,
    )


def scan_to_csv(scan: ScanData) -> str:
    """Serialize a scan to CSV text.

    Layout: comment lines carrying the fixed-arm metadata and seed, then a
    ``theta_deg,counts`` header and one row per point.
    """
    lines = [
        f"# fixed_arm={scan.theta_fixed_arm}",
        f"# fixed_theta_deg={scan.theta_fixed!r}",
        f"# seed={scan.config.seed}",
        "theta_deg,counts",
    ]
    for theta, count in zip(scan.angles, scan.counts):
        lines.append(f"{theta!r},{count}")
    return "\n".join(lines) + "\n"


def scan_from_csv(text: str) -> ScanData:
    """Parse scan CSV text produced by scan_to_csv.

    Only the serialized fields are recovered; detection parameters other
    than the seed are not part of the format and come back as defaults.
    """
    meta: dict[str, str] = {}
    angles: list[float] = []
    counts: list[int] = []
    header_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line.lstrip("#").strip().partition("=")
            meta[key.strip()] = value.strip()
            continue
        if not header_seen:
            if line != "theta_deg,counts":
                raise ValueError(f"line {lineno}: expected header 'theta_deg,counts', got {line!r}")
            header_seen = True
            continue
        try:
            theta_str, count_str = line.split(",")
            angles.append(float(theta_str))
            counts.append(int(count_str))
        except ValueError:
            raise ValueError(f"line {lineno}: malformed scan row {line!r}") from None
    if not header_seen:
        raise ValueError("scan CSV has no 'theta_deg,counts' header")
    missing = [k for k in ("fixed_arm", "fixed_theta_deg", "seed") if k not in meta]
    if missing:
        raise ValueError(f"scan CSV lacks metadata: {', '.join(missing)}")
    return ScanData(
        theta_fixed_arm=meta["fixed_arm"],
        theta_fixed=float(meta["fixed_theta_deg"]),
        angles=tuple(angles),
        counts=tuple(counts),
        config=DetectionConfig(seed=int(meta["seed"])),
    )
