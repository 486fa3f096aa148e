"""Wavelength structure of the pair source.

Signal and idler wavelengths are tied by energy conservation against the
pump, 1/lambda_s + 1/lambda_i = 1/lambda_p.  The two cross-polarized
emission terms have wavelength-dependent rates, modeled either by Gaussian
spectral profiles or by a tabulated spectrum; the rate ratio at a given
signal wavelength fixes the per-channel amplitude ratio of the two-photon
state.

All wavelengths are vacuum nanometers.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .biphoton import BiphotonPureState
from .correlation import estimate_f

__all__ = [
    "DEFAULT_PUMP_NM",
    "RATIO_CONVENTIONS",
    "PumpConfig",
    "SpectralProfile",
    "SpectralChannel",
    "TabulatedSpectrum",
    "idler_wavelength",
    "default_profiles",
    "build_channels",
    "build_channels_from_table",
    "channel_state",
]

# Pump at the second harmonic of the degenerate pair wavelength 859.4 nm.
DEFAULT_PUMP_NM = 429.7

# How a measured HV/VH rate ratio is read back into the state parameter:
# 'ratio_as_f' takes f = sqrt(rate_VH / rate_HV) (term weights as modeled),
# 'ratio_as_inverse_f' takes the reciprocal (swapped term labeling).
RATIO_CONVENTIONS = ("ratio_as_f", "ratio_as_inverse_f")

DEFAULT_CHANNEL_RANGE_NM = (860.0, 874.0)
DEFAULT_CHANNEL_COUNT = 8

_DEFAULT_FWHM_NM = 8.0
_BALANCED_NM = 870.0  # rates equal here
_TRIPLE_RATIO_NM = 866.0  # rate_HV / rate_VH = 3 here
# The log-ratio of two equal-width, equal-peak Gaussians is linear in
# wavelength, so a symmetric center split about the balance point is solved
# from the single ratio condition at 866 nm.
_CENTER_SPLIT_NM = (
    _DEFAULT_FWHM_NM**2
    * math.log(3.0)
    / (8.0 * math.log(2.0) * (_BALANCED_NM - _TRIPLE_RATIO_NM))
)


@dataclass(frozen=True)
class PumpConfig:
    """Pump wavelength in nm."""

    lambda_pump: float = DEFAULT_PUMP_NM

    def __post_init__(self) -> None:
        if not (self.lambda_pump > 0.0 and math.isfinite(self.lambda_pump)):
            raise ValueError(f"pump wavelength must be positive, got {self.lambda_pump}")


@dataclass(frozen=True)
class SpectralProfile:
    """Gaussian emission-rate profile.

    Attributes:
        center: Center wavelength, nm.
        width: Full width at half maximum, nm.
        peak: Rate at the center, counts/s.
    """

    center: float
    width: float
    peak: float

    def __post_init__(self) -> None:
        if self.width <= 0.0:
            raise ValueError(f"profile width must be > 0, got {self.width}")
        if self.peak < 0.0:
            raise ValueError(f"profile peak must be >= 0, got {self.peak}")

    def rate(self, lambda_nm: float) -> float:
        """Rate at the given wavelength, counts/s."""
        x = (lambda_nm - self.center) / self.width
        return self.peak * math.exp(-4.0 * math.log(2.0) * x * x)


@dataclass(frozen=True)
class SpectralChannel:
    """One narrow wavelength channel of the source.

    Attributes:
        lambda_signal: Signal wavelength, nm (the channel key).
        lambda_idler: Energy-matched idler wavelength, nm.
        rate_HV: Rate of the H-signal / V-idler term, counts/s.
        rate_VH: Rate of the V-signal / H-idler term, counts/s.
        alpha: Relative phase of the channel state, radians.
    """

    lambda_signal: float
    lambda_idler: float
    rate_HV: float
    rate_VH: float
    alpha: float

    def __post_init__(self) -> None:
        if self.lambda_signal <= 0.0 or self.lambda_idler <= 0.0:
            raise ValueError("channel wavelengths must be positive")
        if self.rate_HV < 0.0 or self.rate_VH < 0.0:
            raise ValueError("channel rates must be >= 0")
        if self.rate_HV == 0.0 and self.rate_VH == 0.0:
            raise ValueError("channel rates must not both be zero")


def idler_wavelength(
    lambda_signal: float, pump: PumpConfig | float = DEFAULT_PUMP_NM
) -> float:
    """Idler wavelength paired with a signal wavelength by energy conservation.

    Args:
        lambda_signal: Signal wavelength, nm; must exceed the pump wavelength
            so the idler carries positive energy.
        pump: Pump configuration or bare pump wavelength in nm.

    Returns:
        lambda_idler = 1 / (1/lambda_pump - 1/lambda_signal), nm.
    """
    lp = pump.lambda_pump if isinstance(pump, PumpConfig) else float(pump)
    if lp <= 0.0:
        raise ValueError(f"pump wavelength must be positive, got {lp}")
    if lambda_signal <= lp:
        raise ValueError(
            f"signal wavelength {lambda_signal} nm must exceed the pump wavelength {lp} nm"
        )
    return 1.0 / (1.0 / lp - 1.0 / lambda_signal)


def default_profiles(peak: float = 1000.0) -> tuple[SpectralProfile, SpectralProfile]:
    """Default HV and VH rate profiles.

    Equal-peak 8-nm-FWHM Gaussians whose centers straddle 870 nm so the
    HV/VH ratio is exactly 3 at 866 nm and exactly 1 at 870 nm.
    """
    hv = SpectralProfile(center=_BALANCED_NM - _CENTER_SPLIT_NM / 2.0, width=_DEFAULT_FWHM_NM, peak=peak)
    vh = SpectralProfile(center=_BALANCED_NM + _CENTER_SPLIT_NM / 2.0, width=_DEFAULT_FWHM_NM, peak=peak)
    return hv, vh


def _signal_grid(lambda_range: tuple[float, float], n_channels: int) -> np.ndarray:
    lo, hi = lambda_range
    if n_channels < 1:
        raise ValueError(f"n_channels must be >= 1, got {n_channels}")
    if lo > hi:
        raise ValueError(f"invalid wavelength range ({lo}, {hi})")
    return np.linspace(lo, hi, n_channels)


def build_channels(
    hv: SpectralProfile,
    vh: SpectralProfile,
    alpha: float = 0.0,
    lambda_range: tuple[float, float] = DEFAULT_CHANNEL_RANGE_NM,
    n_channels: int = DEFAULT_CHANNEL_COUNT,
    pump: PumpConfig = PumpConfig(),
) -> tuple[SpectralChannel, ...]:
    """Build channels on a uniform signal-wavelength grid from rate profiles.

    Args:
        hv: Profile of the H-signal / V-idler rate.
        vh: Profile of the V-signal / H-idler rate.
        alpha: Relative phase shared by all channels, radians.
        lambda_range: (min, max) signal wavelength in nm, both included.
            With n_channels = 1 the grid is the single point lambda_range[0].
        n_channels: Number of channels, >= 1.
        pump: Pump configuration for the idler pairing.
    """
    grid = _signal_grid(lambda_range, n_channels)
    return tuple(
        SpectralChannel(
            lambda_signal=float(ls),
            lambda_idler=idler_wavelength(float(ls), pump),
            rate_HV=hv.rate(float(ls)),
            rate_VH=vh.rate(float(ls)),
            alpha=alpha,
        )
        for ls in grid
    )


class TabulatedSpectrum:
    """Measured HV/VH rates on a wavelength grid, linearly interpolated.

    Built from a CSV file with header ``lambda_nm,rate_hv,rate_vh``.  Rows
    are sorted by wavelength; queries outside the tabulated range clamp to
    the edge values.
    """

    def __init__(self, lambda_nm, rate_hv, rate_vh) -> None:
        lam = np.asarray(lambda_nm, dtype=float)
        hv = np.asarray(rate_hv, dtype=float)
        vh = np.asarray(rate_vh, dtype=float)
        if lam.ndim != 1 or lam.size < 2:
            raise ValueError("tabulated spectrum needs at least two rows")
        if lam.shape != hv.shape or lam.shape != vh.shape:
            raise ValueError("tabulated spectrum columns differ in length")
        order = np.argsort(lam)
        lam = lam[order]
        if np.any(np.diff(lam) <= 0.0):
            raise ValueError("tabulated wavelengths must be distinct")
        if np.any(hv < 0.0) or np.any(vh < 0.0):
            raise ValueError("tabulated rates must be >= 0")
        self._lambda = lam
        self._hv = hv[order]
        self._vh = vh[order]

    @classmethod
    def from_csv(cls, path) -> "TabulatedSpectrum":
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or [h.strip() for h in header] != ["lambda_nm", "rate_hv", "rate_vh"]:
                raise ValueError(
                    f"{path}: expected header 'lambda_nm,rate_hv,rate_vh', got {header}"
                )
            rows = [row for row in reader if row]
        try:
            data = [(float(r[0]), float(r[1]), float(r[2])) for r in rows]
        except (ValueError, IndexError) as exc:
            raise ValueError(f"{path}: malformed spectrum row: {exc}") from None
        if not data:
            raise ValueError(f"{path}: spectrum file has no data rows")
        lam, hv, vh = zip(*data)
        return cls(lam, hv, vh)

    def rate_hv(self, lambda_nm: float) -> float:
        return float(np.interp(lambda_nm, self._lambda, self._hv))

    def rate_vh(self, lambda_nm: float) -> float:
        return float(np.interp(lambda_nm, self._lambda, self._vh))


def build_channels_from_table(
    table: TabulatedSpectrum,
    alpha: float = 0.0,
    lambda_range: tuple[float, float] = DEFAULT_CHANNEL_RANGE_NM,
    n_channels: int = DEFAULT_CHANNEL_COUNT,
    pump: PumpConfig = PumpConfig(),
) -> tuple[SpectralChannel, ...]:
    """Build channels on a uniform grid from a tabulated spectrum."""
    grid = _signal_grid(lambda_range, n_channels)
    return tuple(
        SpectralChannel(
            lambda_signal=float(ls),
            lambda_idler=idler_wavelength(float(ls), pump),
            rate_HV=table.rate_hv(float(ls)),
            rate_VH=table.rate_vh(float(ls)),
            alpha=alpha,
        )
        for ls in grid
    )


def channel_state(
    channel: SpectralChannel, convention: str = "ratio_as_f"
) -> BiphotonPureState:
    """Two-photon state of one channel under the chosen ratio convention.

    Args:
        channel: Spectral channel with its two term rates.
        convention: 'ratio_as_f' or 'ratio_as_inverse_f'; see RATIO_CONVENTIONS.

    Raises:
        ValueError: For an unknown convention or when the chosen reading is
            infinite (the zero-rate side would need a label swap).
    """
    if convention not in RATIO_CONVENTIONS:
        raise ValueError(
            f"unknown ratio convention {convention!r}, expected one of {RATIO_CONVENTIONS}"
        )
    est = estimate_f(channel.rate_HV, channel.rate_VH)
    f = est.f_hat if convention == "ratio_as_f" else est.f_hat_inverse
    if math.isinf(f):
        raise ValueError(
            f"amplitude ratio is infinite under {convention}; "
            "swap the term labeling (use the other convention)"
        )
    return BiphotonPureState(f=f, alpha=channel.alpha)
