"""PSD estimation, 99% occupied bandwidth, and bandwidth efficiency.

The PSD is a Welch averaged periodogram, two-sided and centered at zero,
power-normalized so that the density integrates to the mean signal power.
Occupied bandwidth trims half the excluded power from each spectral tail
inward, interpolating linearly inside the boundary bins, which matches
common spectrum-analyzer OBW semantics and keeps the estimate robust to
bin resolution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal as sp_signal

from .core import IqSignal


@dataclass(frozen=True)
class PsdEstimate:
    """Two-sided PSD on a uniform frequency grid centered at 0 Hz."""

    freqs_hz: np.ndarray
    density: np.ndarray
    resolution_hz: float

    def __post_init__(self):
        f = np.asarray(self.freqs_hz, dtype=np.float64).copy()
        d = np.asarray(self.density, dtype=np.float64).copy()
        if f.shape != d.shape or f.ndim != 1 or f.size < 2:
            raise ValueError("frequency grid and density must match, length >= 2")
        if np.any(d < 0):
            raise ValueError("density must be non-negative")
        f.setflags(write=False)
        d.setflags(write=False)
        object.__setattr__(self, "freqs_hz", f)
        object.__setattr__(self, "density", d)

    def total_power(self) -> float:
        return float(np.sum(self.density) * self.resolution_hz)


def welch_psd(
    signal: IqSignal,
    segment_len: int = 4096,
    overlap_fraction: float = 0.5,
    window: str = "hann",
) -> PsdEstimate:
    """Averaged, windowed, overlapped periodogram of a complex signal.

    segment_len must be a power of two no longer than the signal; the
    window is power-normalized by scipy so Parseval consistency holds
    (sum(density) * df equals the mean signal power up to estimator noise).
    """
    n = len(signal)
    if segment_len < 2 or (segment_len & (segment_len - 1)) != 0:
        raise ValueError("segment_len must be a power of two >= 2")
    if segment_len > n:
        raise ValueError("segment longer than signal")
    if not 0.0 <= overlap_fraction < 1.0:
        raise ValueError("overlap_fraction must be in [0, 1)")
    freqs, density = sp_signal.welch(
        signal.samples,
        fs=signal.sample_rate_hz,
        window=window,
        nperseg=segment_len,
        noverlap=int(overlap_fraction * segment_len),
        detrend=False,
        return_onesided=False,
        scaling="density",
    )
    freqs = np.fft.fftshift(freqs)
    density = np.fft.fftshift(density)
    return PsdEstimate(
        freqs_hz=freqs,
        density=density,
        resolution_hz=signal.sample_rate_hz / segment_len,
    )


def occupied_bandwidth(psd: PsdEstimate, fraction: float = 0.99) -> float:
    """Width of the interval containing `fraction` of total power.

    Trims (1 - fraction)/2 of the power from each tail inward; bin contents
    are treated as rectangles of width `resolution_hz` so the boundary is
    interpolated inside its bin.
    """
    if not 0.0 < fraction < 1.0:
        raise ValueError("fraction must be in (0, 1)")
    bin_power = psd.density * psd.resolution_hz
    total = float(np.sum(bin_power))
    if total <= 0.0:
        raise ValueError("degenerate PSD: no power")
    tail = (1.0 - fraction) / 2.0 * total
    df = psd.resolution_hz

    cum_lo = np.cumsum(bin_power)
    i_lo = int(np.searchsorted(cum_lo, tail, side="left"))
    below = cum_lo[i_lo - 1] if i_lo > 0 else 0.0
    frac_in = (tail - below) / bin_power[i_lo] if bin_power[i_lo] > 0 else 0.0
    f_lo = (psd.freqs_hz[i_lo] - df / 2.0) + frac_in * df

    cum_hi = np.cumsum(bin_power[::-1])
    i_hi = int(np.searchsorted(cum_hi, tail, side="left"))
    below = cum_hi[i_hi - 1] if i_hi > 0 else 0.0
    rev_power = bin_power[::-1]
    frac_in = (tail - below) / rev_power[i_hi] if rev_power[i_hi] > 0 else 0.0
    f_hi = (psd.freqs_hz[::-1][i_hi] + df / 2.0) - frac_in * df

    return float(f_hi - f_lo)


def bandwidth_efficiency(bit_rate_bps: float, obw_hz: float) -> float:
    """Delivered bit rate divided by occupied bandwidth, in bps/Hz."""
    if bit_rate_bps <= 0 or obw_hz <= 0:
        raise ValueError("bit rate and bandwidth must be positive")
    return bit_rate_bps / obw_hz


def write_psd_csv(psd: PsdEstimate, path) -> None:
    """Two-column CSV (freq_hz, density) for plotting."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write("freq_hz,density\n")
        for f, d in zip(psd.freqs_hz, psd.density):
            fh.write(f"{f:.9g},{d:.9g}\n")
