"""Two-photon polarization model of a down-conversion pair source.

The source emits signal/idler photon pairs in a superposition of the two
cross-polarized terms |H>_s|V>_i and |V>_s|H>_i.  The relative weight of the
second term is an amplitude ratio ``f`` and its relative phase is ``alpha``;
f = 1 with alpha = 0 or pi gives a maximally entangled state, f = 0 a bare
|H>_s|V>_i product.  Each arm ends in a linear polarizer whose angle is
measured from the vertical axis, so the transmitted direction at angle theta
has horizontal component sin(theta) and vertical component cos(theta).

All angles crossing this module's public boundary are degrees; phases are
radians.  Polarizer settings are 180-degree periodic and are normalized on
construction.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

__all__ = [
    "BiphotonPureState",
    "ProductState",
    "MeasurementSetting",
    "JointOutcomeDistribution",
    "coincidence_amplitude",
    "coincidence_probability",
    "rate_expanded",
    "rate_product",
    "product_probability",
    "joint_outcome_distribution",
    "correlation_E",
]

_TWO_PI = 2.0 * math.pi


def normalize_angle_deg(theta: float) -> float:
    """Reduce a polarizer angle to [0, 180); analyzer axes are 180-deg periodic."""
    t = math.fmod(theta, 180.0)
    return t + 180.0 if t < 0.0 else t


@dataclass(frozen=True)
class BiphotonPureState:
    """Pure polarization state of one emitted pair.

    Attributes:
        f: Amplitude ratio of the |V>_s|H>_i term relative to |H>_s|V>_i.
            Must be finite and non-negative.
        alpha: Relative phase between the two terms in radians, stored
            normalized to [0, 2*pi).
    """

    f: float = 1.0
    alpha: float = 0.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.f) or self.f < 0.0:
            raise ValueError(f"amplitude ratio f must be finite and >= 0, got {self.f}")
        if not math.isfinite(self.alpha):
            raise ValueError(f"relative phase alpha must be finite, got {self.alpha}")
        object.__setattr__(self, "f", float(self.f))
        object.__setattr__(self, "alpha", float(self.alpha) % _TWO_PI)

    @classmethod
    def from_degrees(cls, f: float, alpha_deg: float) -> "BiphotonPureState":
        """Build a state with the phase given in degrees."""
        return cls(f, math.radians(alpha_deg))


@dataclass(frozen=True)
class ProductState:
    """Separable reference state: both photons polarized along +45 degrees.

    Its coincidence rate factorizes into independent single-arm fringes, so
    the idler-scan peak position never depends on the signal polarizer angle.
    Used as the unentangled baseline in analysis and simulation.
    """


@dataclass(frozen=True)
class MeasurementSetting:
    """Polarizer angles of the two arms, degrees from the vertical axis.

    Angles are stored modulo 180 since a polarizer axis is orientation-free.
    """

    theta_s: float
    theta_i: float

    def __post_init__(self) -> None:
        for name in ("theta_s", "theta_i"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, normalize_angle_deg(float(value)))


@dataclass(frozen=True)
class JointOutcomeDistribution:
    """Probabilities of the four transmit/reflect outcomes behind the analyzers.

    Outcome letters are (signal, idler); 't' is transmission at the set angle
    and 'r' transmission at the orthogonal angle.  The four probabilities sum
    to one.
    """

    p_tt: float
    p_tr: float
    p_rt: float
    p_rr: float

    def __post_init__(self) -> None:
        total = self.p_tt + self.p_tr + self.p_rt + self.p_rr
        for name in ("p_tt", "p_tr", "p_rt", "p_rr"):
            p = getattr(self, name)
            if not (-1e-12 <= p <= 1.0 + 1e-12):
                raise ValueError(f"{name} out of [0, 1]: {p}")
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"outcome probabilities must sum to 1, got {total}")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p_tt, self.p_tr, self.p_rt, self.p_rr)


def coincidence_amplitude(state: BiphotonPureState, setting: MeasurementSetting) -> complex:
    """Projected two-photon amplitude behind the two polarizers.

    Args:
        state: Pair state (pure superposition model).
        setting: Polarizer angles in degrees.

    Returns:
        Complex amplitude with magnitude <= 1; its squared magnitude is the
        coincidence probability.
    """
    ts = math.radians(setting.theta_s)
    ti = math.radians(setting.theta_i)
    cross = state.f * cmath.exp(1j * state.alpha)
    num = math.sin(ts) * math.cos(ti) + cross * math.cos(ts) * math.sin(ti)
    return num / math.sqrt(1.0 + state.f * state.f)


def coincidence_probability(
    state: BiphotonPureState | ProductState, setting: MeasurementSetting
) -> float:
    """Probability that both analyzers transmit, for either state model.

    Accepts the entangled pure state or the separable +45 product state so
    downstream scan simulation and correlation analysis can treat both
    uniformly.
    """
    if isinstance(state, ProductState):
        return product_probability(setting)
    amp = coincidence_amplitude(state, setting)
    p = amp.real * amp.real + amp.imag * amp.imag
    return min(p, 1.0)


def rate_expanded(f: float, alpha: float, setting: MeasurementSetting) -> float:
    """Unnormalized coincidence rate in sum/difference-angle form.

    Evaluates the three-term expansion over sin^2(theta_s + theta_i),
    sin^2(theta_s - theta_i) and their cross product.  It equals
    (1 + f^2) * coincidence_probability for the same parameters; keeping the
    expanded form separate lets tests check the two routes against each other.

    Args:
        f: Amplitude ratio, >= 0.
        alpha: Relative phase, radians.
        setting: Polarizer angles in degrees.
    """
    if not math.isfinite(f) or f < 0.0:
        raise ValueError(f"amplitude ratio f must be finite and >= 0, got {f}")
    ts = math.radians(setting.theta_s)
    ti = math.radians(setting.theta_i)
    plus = math.sin(ts + ti)
    minus = math.sin(ts - ti)
    f2 = f * f
    ca = math.cos(alpha)
    return (
        (1.0 + f2 + 2.0 * f * ca) / 4.0 * plus * plus
        + (1.0 + f2 - 2.0 * f * ca) / 4.0 * minus * minus
        + (1.0 - f2) / 2.0 * plus * minus
    )


def rate_product(setting: MeasurementSetting) -> float:
    """Coincidence fringe product of the separable +45 state (unnormalized form).

    Both arms see an independent sin^2(theta + 45 deg) fringe.
    """
    ts = math.radians(setting.theta_s + 45.0)
    ti = math.radians(setting.theta_i + 45.0)
    return (math.sin(ti) * math.sin(ts)) ** 2


def product_probability(setting: MeasurementSetting) -> float:
    """Normalized coincidence probability of the +45 product state.

    The fringe product is already a unit-sum joint distribution over the four
    analyzer outcomes, so the probability equals rate_product.
    """
    return min(rate_product(setting), 1.0)


def joint_outcome_distribution(
    state: BiphotonPureState | ProductState, setting: MeasurementSetting
) -> JointOutcomeDistribution:
    """Four-outcome distribution behind two-output analyzers.

    The transmit port of each analyzer sits at the set angle and the reflect
    port at the set angle + 90 degrees.

    Returns:
        JointOutcomeDistribution over (tt, tr, rt, rr), summing to one.
    """
    ts, ti = setting.theta_s, setting.theta_i
    return JointOutcomeDistribution(
        p_tt=coincidence_probability(state, MeasurementSetting(ts, ti)),
        p_tr=coincidence_probability(state, MeasurementSetting(ts, ti + 90.0)),
        p_rt=coincidence_probability(state, MeasurementSetting(ts + 90.0, ti)),
        p_rr=coincidence_probability(state, MeasurementSetting(ts + 90.0, ti + 90.0)),
    )


def correlation_E(
    state: BiphotonPureState | ProductState, setting: MeasurementSetting
) -> float:
    """Two-outcome correlation E = p_tt + p_rr - p_tr - p_rt, in [-1, 1]."""
    d = joint_outcome_distribution(state, setting)
    e = d.p_tt + d.p_rr - d.p_tr - d.p_rt
    return max(-1.0, min(1.0, e))
