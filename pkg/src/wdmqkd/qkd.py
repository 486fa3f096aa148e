"""Entanglement-based key exchange per spectral channel (BBM92 flavor).

Both parties measure each incoming photon in a randomly chosen basis,
rectilinear (analyzer at 0 deg) or diagonal (45 deg); transmission maps to
bit 0 and reflection to bit 1.  Pairs measured in different bases are
discarded.  Depending on the state, matched-basis outcomes are correlated or
anti-correlated per basis, so one party may flip its bits in a flagged basis
before errors are counted.  The asymptotic secret fraction uses the usual
two-basis entropy bound, and per-channel reports add up across a
wavelength-multiplexed link.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .biphoton import (
    BiphotonPureState,
    MeasurementSetting,
    ProductState,
    correlation_E,
    joint_outcome_distribution,
)

__all__ = [
    "ProtocolConfig",
    "ChannelKeyReport",
    "WdmSummary",
    "binary_entropy",
    "secret_fraction",
    "derive_flips",
    "run_bbm92",
    "wdm_aggregate",
    "reports_to_csv",
    "report_to_dict",
]

RECTILINEAR_DEG = 0.0
DIAGONAL_DEG = 45.0


@dataclass(frozen=True)
class ProtocolConfig:
    """Protocol parameters of one key-exchange run.

    Attributes:
        n_pairs: Number of distributed pairs, >= 1.
        bases: Analyzer angles (rectilinear, diagonal) in degrees.
        flip_rectilinear: One party inverts its rectilinear-basis bits
            (the default suits the anti-correlated rectilinear outcomes of
            the cross-polarized source).
        flip_diagonal: Same for the diagonal basis.
        seed: Master seed; each channel derives its stream from
            (seed, channel_id).
    """

    n_pairs: int = 100_000
    bases: tuple[float, float] = (RECTILINEAR_DEG, DIAGONAL_DEG)
    flip_rectilinear: bool = True
    flip_diagonal: bool = False
    seed: int = 0

    def __post_init__(self) -> None:
        if int(self.n_pairs) != self.n_pairs or self.n_pairs < 1:
            raise ValueError(f"n_pairs must be a positive integer, got {self.n_pairs}")
        if len(self.bases) != 2:
            raise ValueError(f"exactly two basis angles are required, got {self.bases}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ValueError(f"seed must be a non-negative integer, got {self.seed}")
        object.__setattr__(self, "n_pairs", int(self.n_pairs))
        object.__setattr__(self, "bases", (float(self.bases[0]), float(self.bases[1])))
        object.__setattr__(self, "seed", int(self.seed))


@dataclass(frozen=True)
class ChannelKeyReport:
    """Key-rate figures of one spectral channel.

    qber values are NaN when no pair was sifted into that basis; the secret
    fraction is zero in that case.
    """

    lambda_signal: float
    sifted_bits: int
    qber_rect: float
    qber_diag: float
    secret_fraction: float
    secret_bits_estimate: float


@dataclass(frozen=True)
class WdmSummary:
    """Aggregate over the channels of a wavelength-multiplexed link."""

    channels: tuple[ChannelKeyReport, ...]
    total_sifted_bits: int
    total_secret_bits: float


def binary_entropy(x: float) -> float:
    """Shannon entropy of a bit with bias x, in bits; h(0) = h(1) = 0."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"binary_entropy argument must be in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def secret_fraction(qber_rect: float, qber_diag: float) -> float:
    """Asymptotic secret fraction 1 - h(q_rect) - h(q_diag), floored at 0."""
    return max(0.0, 1.0 - binary_entropy(qber_rect) - binary_entropy(qber_diag))


def derive_flips(
    state: BiphotonPureState | ProductState,
    bases: tuple[float, float] = (RECTILINEAR_DEG, DIAGONAL_DEG),
) -> tuple[bool, bool]:
    """Calibrate the per-basis flips from the sign of the correlation.

    A negative correlation in a basis means matched-basis outcomes
    anti-correlate there, so one party should invert its bits.
    """
    rect, diag = bases
    e_rect = correlation_E(state, MeasurementSetting(rect, rect))
    e_diag = correlation_E(state, MeasurementSetting(diag, diag))
    return (e_rect < 0.0, e_diag < 0.0)


def _qber(errors: np.ndarray, mask: np.ndarray) -> float:
    n = int(mask.sum())
    if n == 0:
        return math.nan
    return float(errors[mask].sum() / n)


def run_bbm92(
    state: BiphotonPureState | ProductState,
    config: ProtocolConfig,
    channel_id: int = 0,
    lambda_signal: float = math.nan,
) -> ChannelKeyReport:
    """Simulate one channel's key exchange and report its rates.

    Per pair, both parties draw a uniform basis bit; the joint analyzer
    outcome is then sampled from the four-outcome distribution at the chosen
    angles via a single uniform draw against its cumulative weights.  The
    random stream is derived from (config.seed, channel_id), so reruns with
    the same arguments reproduce the report exactly.

    Args:
        state: Channel state the outcomes are sampled from.
        config: Protocol parameters.
        channel_id: Channel index mixed into the stream derivation.
        lambda_signal: Channel wavelength carried into the report, nm.

    Returns:
        ChannelKeyReport with sifted size, per-basis error rates, and the
        secret-bit estimate sifted_bits * secret_fraction.
    """
    rng = np.random.default_rng(np.random.SeedSequence([config.seed, int(channel_id)]))
    n = config.n_pairs
    basis_s = rng.integers(0, 2, size=n)
    basis_i = rng.integers(0, 2, size=n)
    draw = rng.random(n)

    # Outcome index per pair: 0 = tt, 1 = tr, 2 = rt, 3 = rr.
    outcome = np.empty(n, dtype=np.int64)
    for bs in (0, 1):
        for bi in (0, 1):
            mask = (basis_s == bs) & (basis_i == bi)
            if not mask.any():
                continue
            setting = MeasurementSetting(config.bases[bs], config.bases[bi])
            dist = joint_outcome_distribution(state, setting)
            cdf = np.cumsum(dist.as_tuple())
            cdf[-1] = 1.0
            outcome[mask] = np.searchsorted(cdf, draw[mask], side="right")

    bit_s = outcome >> 1
    bit_i = outcome & 1
    matched = basis_s == basis_i
    rect = matched & (basis_s == 0)
    diag = matched & (basis_s == 1)

    flips = np.array([config.flip_rectilinear, config.flip_diagonal], dtype=np.int64)
    errors = (bit_s ^ bit_i ^ flips[basis_i]).astype(np.int64)

    qber_rect = _qber(errors, rect)
    qber_diag = _qber(errors, diag)
    sifted_bits = int(matched.sum())
    if math.isnan(qber_rect) or math.isnan(qber_diag):
        fraction = 0.0
    else:
        fraction = secret_fraction(qber_rect, qber_diag)
    return ChannelKeyReport(
        lambda_signal=float(lambda_signal),
        sifted_bits=sifted_bits,
        qber_rect=qber_rect,
        qber_diag=qber_diag,
        secret_fraction=fraction,
        secret_bits_estimate=sifted_bits * fraction,
    )


def wdm_aggregate(reports) -> WdmSummary:
    """Sum per-channel key figures over a multiplexed link.

    The per-channel table is preserved; totals are plain sums, so identical
    channels contribute identical shares.
    """
    channels = tuple(reports)
    return WdmSummary(
        channels=channels,
        total_sifted_bits=sum(r.sifted_bits for r in channels),
        total_secret_bits=sum(r.secret_bits_estimate for r in channels),
    )


def report_to_dict(report: ChannelKeyReport) -> dict:
    """JSON-ready form of a report; NaN error rates map to null."""
    as_json = lambda x: None if math.isnan(x) else x
    return {
        "lambda_nm": as_json(report.lambda_signal),
        "sifted_bits": report.sifted_bits,
        "qber_rect": as_json(report.qber_rect),
        "qber_diag": as_json(report.qber_diag),
        "secret_fraction": report.secret_fraction,
        "secret_bits": report.secret_bits_estimate,
    }


def reports_to_csv(reports) -> str:
    """Per-channel key table as CSV text."""
    lines = ["lambda_nm,sifted_bits,qber_rect,qber_diag,secret_fraction,secret_bits"]
    for r in reports:
        lines.append(
            f"{r.lambda_signal!r},{r.sifted_bits},{r.qber_rect!r},"
            f"{r.qber_diag!r},{r.secret_fraction!r},{r.secret_bits_estimate!r}"
        )
    return "\n".join(lines) + "\n"
