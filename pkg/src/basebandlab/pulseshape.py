"""Raised-cosine and root-raised-cosine pulses, FIR design, and ISI checks.

Closed-form impulse responses are evaluated with exact limit expressions at
their removable singularities (guard band 1e-9 on the vanishing denominator
factor), so common grid points such as t = T at alpha = 0.25 never produce
NaN.  FIR designs sample the closed forms on a uniform grid of
span_symbols * samples_per_symbol + 1 points, giving an odd, even-symmetric
tap vector with integer group delay.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.signal import oaconvolve

from .core import FilterKind, IqSignal, Normalization, validate_rolloff

_SINGULARITY_GUARD = 1e-9


def rc_impulse(t_over_t: float | np.ndarray, alpha: float) -> float | np.ndarray:
    """Raised-cosine impulse response g(t/T), unit peak at t = 0.

    g(x) = sinc(x) * cos(pi*alpha*x) / (1 - (2*alpha*x)^2), with the limit
    value (pi/4) * sinc(1/(2*alpha)) at |x| = 1/(2*alpha) and sinc(x) at
    alpha = 0.
    """
    alpha = validate_rolloff(alpha)
    x = np.asarray(t_over_t, dtype=np.float64)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    if alpha == 0.0:
        out = np.sinc(x)
    else:
        den = 1.0 - (2.0 * alpha * x) ** 2
        out = np.empty_like(x)
        singular = np.abs(den) < _SINGULARITY_GUARD
        regular = ~singular
        out[regular] = (
            np.sinc(x[regular]) * np.cos(np.pi * alpha * x[regular]) / den[regular]
        )
        if singular.any():
            out[singular] = (np.pi / 4.0) * np.sinc(1.0 / (2.0 * alpha))
    return float(out[0]) if scalar else out


def rrc_impulse(t_over_t: float | np.ndarray, alpha: float) -> float | np.ndarray:
    """Root-raised-cosine impulse response g(t/T), value 1 - a + 4a/pi at 0.

    g(x) = [sin(pi*(1-a)*x) + 4*a*x*cos(pi*(1+a)*x)] / [pi*x*(1 - (4*a*x)^2)]
    with limit values at x = 0 and |x| = 1/(4*a), and sinc(x) at a = 0.
    """
    alpha = validate_rolloff(alpha)
    x = np.asarray(t_over_t, dtype=np.float64)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    if alpha == 0.0:
        out = np.sinc(x)
    else:
        out = np.empty_like(x)
        bracket = 1.0 - (4.0 * alpha * x) ** 2
        at_zero = np.abs(x) < _SINGULARITY_GUARD
        at_quarter = (np.abs(bracket) < _SINGULARITY_GUARD) & ~at_zero
        regular = ~(at_zero | at_quarter)
        xr = x[regular]
        out[regular] = (
            np.sin(np.pi * (1.0 - alpha) * xr)
            + 4.0 * alpha * xr * np.cos(np.pi * (1.0 + alpha) * xr)
        ) / (np.pi * xr * bracket[regular])
        out[at_zero] = 1.0 - alpha + 4.0 * alpha / np.pi
        if at_quarter.any():
            out[at_quarter] = (alpha / np.sqrt(2.0)) * (
                (1.0 + 2.0 / np.pi) * np.sin(np.pi / (4.0 * alpha))
                + (1.0 - 2.0 / np.pi) * np.cos(np.pi / (4.0 * alpha))
            )
    return float(out[0]) if scalar else out


def rc_freq_response(
    f_hz: float | np.ndarray, alpha: float, symbol_rate_hz: float
) -> float | np.ndarray:
    """Raised-cosine frequency response: T in the flat region, cosine taper
    across the transition band, zero beyond (1+alpha)F/2.  Even in f."""
    alpha = validate_rolloff(alpha)
    if not symbol_rate_hz > 0:
        raise ValueError("symbol_rate_hz must be positive")
    t_sym = 1.0 / symbol_rate_hz
    f = np.abs(np.asarray(f_hz, dtype=np.float64))
    scalar = f.ndim == 0
    f = np.atleast_1d(f)
    f_lo = (1.0 - alpha) * symbol_rate_hz / 2.0
    f_hi = (1.0 + alpha) * symbol_rate_hz / 2.0
    out = np.zeros_like(f)
    out[f <= f_lo] = t_sym
    if alpha > 0.0:
        trans = (f > f_lo) & (f < f_hi)
        out[trans] = (t_sym / 2.0) * (
            1.0 + np.cos((np.pi * t_sym / alpha) * (f[trans] - f_lo))
        )
    return float(out[0]) if scalar else out


_IMPULSE = {
    FilterKind.RAISED_COSINE: rc_impulse,
    FilterKind.ROOT_RAISED_COSINE: rrc_impulse,
}


@dataclass(frozen=True)
class FirFilter:
    """Real, even-symmetric FIR pulse-shaping filter.

    `span_symbols` is the tap grid extent in symbol periods; `alpha` is None
    only for instrument reference taps whose design roll-off is unknown.
    """

    taps: np.ndarray
    samples_per_symbol: int
    kind: FilterKind
    alpha: float | None
    span_symbols: float
    normalization: Normalization

    def __post_init__(self):
        taps = np.asarray(self.taps, dtype=np.float64).copy()
        if taps.ndim != 1 or taps.size < 1:
            raise ValueError("taps must be a non-empty 1-D real sequence")
        taps.setflags(write=False)
        object.__setattr__(self, "taps", taps)
        if self.samples_per_symbol < 1:
            raise ValueError("samples_per_symbol must be positive")
        if self.alpha is not None:
            validate_rolloff(self.alpha)
        scale = np.max(np.abs(taps))
        if scale > 0 and np.max(np.abs(taps - taps[::-1])) > 1e-12 * scale:
            raise ValueError("taps must be even-symmetric about their midpoint")
        if self.normalization is Normalization.UNIT_PEAK and abs(scale - 1.0) > 1e-12:
            raise ValueError("unit-peak filter must have max |tap| = 1")

    @property
    def n_taps(self) -> int:
        return len(self.taps)

    @property
    def group_delay_samples(self) -> float:
        """(M-1)/2; half-integer for even-length tap vectors."""
        return (self.n_taps - 1) / 2.0


@dataclass(frozen=True)
class FrequencyResponse:
    """Frequency response as a callable f (Hz) -> complex amplitude."""

    response: Callable[[np.ndarray], np.ndarray]
    band_limit_hz: float

    def __call__(self, f_hz) -> np.ndarray:
        return self.response(np.asarray(f_hz, dtype=np.float64))


@dataclass(frozen=True)
class IsiReport:
    """Zero-ISI diagnostics for a shaping filter."""

    max_folded_deviation: float
    worst_symbol_crossing: float


def _normalize_taps(taps: np.ndarray, normalization: Normalization) -> np.ndarray:
    if normalization is Normalization.UNIT_PEAK:
        return taps / np.max(np.abs(taps))
    if normalization is Normalization.UNIT_ENERGY:
        return taps / np.sqrt(np.sum(taps**2))
    return taps / np.sum(taps)


def design_fir(
    kind: FilterKind,
    alpha: float,
    samples_per_symbol: int,
    span_symbols: int,
    normalization: Normalization = Normalization.UNIT_PEAK,
) -> FirFilter:
    """Sample the closed-form pulse on a grid of span*sps + 1 points.

    The product span_symbols * samples_per_symbol must be even so the filter
    has an odd tap count and integer group delay.
    """
    alpha = validate_rolloff(alpha)
    if samples_per_symbol < 1 or span_symbols < 1:
        raise ValueError("samples_per_symbol and span_symbols must be positive")
    if (span_symbols * samples_per_symbol) % 2 != 0:
        raise ValueError("span_symbols * samples_per_symbol must be even")
    m = span_symbols * samples_per_symbol + 1
    t = (np.arange(m) - (m - 1) / 2.0) / samples_per_symbol
    taps = _IMPULSE[kind](t, alpha)
    return FirFilter(
        taps=_normalize_taps(taps, normalization),
        samples_per_symbol=samples_per_symbol,
        kind=kind,
        alpha=alpha,
        span_symbols=span_symbols,
        normalization=normalization,
    )


def eight_tap_truncated_fir(kind: FilterKind, alpha: float) -> FirFilter:
    """Instrument-style crude shaping filter: eight taps at quarter-symbol
    pitch straddling the pulse peak.

    The even tap count mirrors the vector-signal-generator structure (two
    unit center taps, main lobe only); its half-sample offset and hard
    truncation at +/-7T/8 are what drive the error-vs-roll-off trends.
    """
    alpha = validate_rolloff(alpha)
    t = (np.arange(8) - 3.5) / 4.0
    taps = _IMPULSE[kind](t, alpha)
    return FirFilter(
        taps=_normalize_taps(taps, Normalization.UNIT_PEAK),
        samples_per_symbol=4,
        kind=kind,
        alpha=alpha,
        span_symbols=1.75,
        normalization=Normalization.UNIT_PEAK,
    )


#: Vector-signal-generator reference tap sets (8 taps, unit peak).
_VSG_TAPS = {
    FilterKind.RAISED_COSINE: (
        0.015609, 0.174413, 0.588622, 1.000000,
        1.000000, 0.588622, 0.174413, 0.015609,
    ),
    FilterKind.ROOT_RAISED_COSINE: (
        0.004490, 0.143258, 0.560131, 1.000000,
        1.000000, 0.560131, 0.143258, 0.004490,
    ),
}


def vsg_reference_taps(kind: FilterKind) -> FirFilter:
    """Verbatim instrument reference taps (8 taps over one symbol, sps=8).

    Reference data only: the generator's design roll-off is not published,
    so `alpha` is None and these taps are never re-derived.
    """
    return FirFilter(
        taps=np.array(_VSG_TAPS[kind], dtype=np.float64),
        samples_per_symbol=8,
        kind=kind,
        alpha=None,
        span_symbols=1.0,
        normalization=Normalization.UNIT_PEAK,
    )


def fir_apply(filt: FirFilter | np.ndarray, signal: IqSignal) -> IqSignal:
    """Full direct-form convolution; output length len(signal) + M - 1.

    Accepts a FirFilter or a bare tap sequence (the convolution itself is
    rate- and shape-agnostic).
    """
    if len(signal) == 0:
        raise ValueError("empty signal")
    taps = filt.taps if isinstance(filt, FirFilter) else np.asarray(filt, dtype=np.float64)
    out = oaconvolve(signal.samples, taps.astype(np.complex128), mode="full")
    return IqSignal(out, signal.sample_rate_hz)


def zero_phase_response(taps: np.ndarray, freqs_norm: np.ndarray) -> np.ndarray:
    """Amplitude response of a symmetric FIR, phase-centered on its midpoint.

    `freqs_norm` is frequency in cycles/sample; the result is real for
    even-symmetric taps.
    """
    taps = np.asarray(taps, dtype=np.float64)
    center = (len(taps) - 1) / 2.0
    k = np.arange(len(taps)) - center
    phase = np.exp(-2j * np.pi * np.outer(freqs_norm, k))
    return np.real(phase @ taps)


def check_nyquist_isi(filt: FirFilter, n_freq: int = 2048) -> IsiReport:
    """Zero-ISI check in both domains.

    Frequency: folds the filter's zero-phase response at multiples of the
    symbol rate over |f| <= F/2 and reports the maximum deviation of the
    folded sum from its mean, relative to that mean (the Nyquist sum is
    constant for an ISI-free pulse).  Time: reports the largest |tap| at
    nonzero symbol-spaced offsets from the (floored) center tap.
    """
    sps = filt.samples_per_symbol
    if sps < 2:
        raise ValueError("samples_per_symbol must be at least 2 to fold the band")
    f = np.linspace(-0.5 / sps, 0.5 / sps, n_freq)
    folded = np.zeros_like(f)
    for m in (-1, 0, 1):
        folded += zero_phase_response(filt.taps, f + m / sps)
    mean = np.mean(folded)
    max_dev = float(np.max(np.abs(folded - mean)) / abs(mean))

    center = (filt.n_taps - 1) // 2
    offsets = np.arange(-(center // sps), (filt.n_taps - 1 - center) // sps + 1)
    crossings = [
        abs(filt.taps[center + n * sps]) for n in offsets if n != 0
    ]
    worst = float(max(crossings)) if crossings else 0.0
    return IsiReport(max_folded_deviation=max_dev, worst_symbol_crossing=worst)


def cascade_response(parts: Sequence[FrequencyResponse]) -> FrequencyResponse:
    """Pointwise product of frequency responses (channel x tx x rx)."""
    parts = list(parts)
    if not parts:
        raise ValueError("cascade requires at least one response")

    def product(f: np.ndarray) -> np.ndarray:
        out = parts[0](f)
        for part in parts[1:]:
            out = out * part(f)
        return out

    return FrequencyResponse(
        response=product, band_limit_hz=min(p.band_limit_hz for p in parts)
    )


def rc_frequency_response(alpha: float, symbol_rate_hz: float) -> FrequencyResponse:
    """Closed-form raised-cosine response wrapped as a FrequencyResponse."""
    alpha = validate_rolloff(alpha)
    return FrequencyResponse(
        response=lambda f: rc_freq_response(f, alpha, symbol_rate_hz),
        band_limit_hz=(1.0 + alpha) * symbol_rate_hz / 2.0,
    )


def write_taps_csv(filt: FirFilter, path) -> None:
    """One coefficient per line, decimal text, 17 significant digits."""
    with open(path, "w", encoding="ascii") as fh:
        for tap in filt.taps:
            fh.write(f"{tap:.17g}\n")
