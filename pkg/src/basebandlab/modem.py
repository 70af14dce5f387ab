"""Bit mapping, pulse-shaped QPSK/OQPSK synthesis, and the known-timing receiver.

Timing recovery is out of scope: synthesis is local, so the receiver is
handed the exact transmit group delay and samples at symbol centers, the
same locked-timing behavior a vector signal analyzer exhibits.  For OQPSK
the quadrature rail is delayed by exactly half a symbol, which is why an
even samples-per-symbol count is required.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    QPSK_CONSTELLATION,
    IqSignal,
    ModFormat,
    SymbolStream,
    as_bits,
)
from .metrics import align
from .pulseshape import FirFilter, fir_apply


@dataclass(frozen=True)
class TxFrame:
    """One synthesized transmission: bits, mapped symbols, shaped signal."""

    bits: np.ndarray
    symbols: SymbolStream
    signal: IqSignal
    filter: FirFilter
    format: ModFormat
    samples_per_symbol: int


@dataclass(frozen=True)
class RxResult:
    """Receiver output: gain-aligned measured symbols, decisions, bits.

    `applied_gain` is the complex factor the receiver multiplied onto the
    raw symbol-instant samples; dividing it back out recovers the
    unaligned measurement.
    """

    measured_symbols: np.ndarray
    decided_symbols: np.ndarray
    decided_bits: np.ndarray
    applied_gain: complex


def map_symbols(bits, fmt: ModFormat) -> SymbolStream:
    """Gray-map bit pairs (b_I, b_Q) onto the unit-magnitude QPSK constellation.

    The map is identical for OQPSK; the half-symbol offset is applied at
    modulation, not here.  Symbol rate is set to 1.0 and rescaled by callers
    that know the line rate.
    """
    bits = as_bits(bits)
    if len(bits) % 2 != 0:
        raise ValueError("bit count must be even (2 bits per symbol)")
    idx = (bits[0::2].astype(np.int64) << 1) | bits[1::2]
    return SymbolStream(QPSK_CONSTELLATION[idx], symbol_rate_hz=1.0)


def unmap_symbols(symbols: np.ndarray) -> np.ndarray:
    """Inverse Gray map; decision ties go to the positive half-plane."""
    symbols = np.asarray(symbols)
    bits = np.empty(2 * len(symbols), dtype=np.uint8)
    bits[0::2] = symbols.real < 0
    bits[1::2] = symbols.imag < 0
    return as_bits(bits)


def decide_symbols(measured: np.ndarray) -> np.ndarray:
    """Nearest-neighbor decisions on the QPSK constellation."""
    measured = np.asarray(measured)
    re = np.where(measured.real < 0, -1.0, 1.0)
    im = np.where(measured.imag < 0, -1.0, 1.0)
    return (re + 1j * im) / np.sqrt(2.0)


def _impulse_trains(symbols: np.ndarray, fmt: ModFormat, sps: int) -> np.ndarray:
    n = len(symbols)
    train = np.zeros(n * sps, dtype=np.complex128)
    if fmt is ModFormat.QPSK:
        train[::sps] = symbols
    else:
        train[::sps] += symbols.real
        train[sps // 2 :: sps] += 1j * symbols.imag
    return train


def modulate_baseband(
    symbols: SymbolStream, fmt: ModFormat, filt: FirFilter
) -> IqSignal:
    """Shape an impulse train with the transmit filter.

    For OQPSK the quadrature-rail impulses are placed sps/2 samples after
    the in-phase impulses before filtering.  Output sample rate is
    symbol_rate * samples_per_symbol and output length is
    n_symbols * sps + n_taps - 1 (full convolution).
    """
    sps = filt.samples_per_symbol
    if fmt is ModFormat.OQPSK and sps % 2 != 0:
        raise ValueError("OQPSK requires even samples/symbol")
    if len(symbols) == 0:
        raise ValueError("empty symbol stream")
    train = _impulse_trains(symbols.symbols, fmt, sps)
    shaped = fir_apply(
        filt, IqSignal(train, symbols.symbol_rate_hz * sps)
    )
    return shaped


def demodulate(
    signal: IqSignal,
    fmt: ModFormat,
    measurement_filter: FirFilter | None,
    sps: int,
    n_symbols: int,
    tx_group_delay_samples: float,
) -> RxResult:
    """Known-timing receiver: optional matched filter, symbol sampling,
    complex-gain alignment, hard decisions.

    `tx_group_delay_samples` is the exact transmit-chain group delay (it may
    be half-integer for even-length instrument-style filters); the sampling
    index is the floor of the total chain delay.  For OQPSK the quadrature
    component is read sps/2 samples after the in-phase component and the
    pair recombined into one measured symbol.
    """
    if fmt is ModFormat.OQPSK and sps % 2 != 0:
        raise ValueError("OQPSK requires even samples/symbol")
    if n_symbols < 1:
        raise ValueError("n_symbols must be positive")
    x = signal.samples
    delay = float(tx_group_delay_samples)
    if measurement_filter is not None:
        x = fir_apply(measurement_filter, signal).samples
        delay += measurement_filter.group_delay_samples
    d = int(np.floor(delay))
    last = d + (n_symbols - 1) * sps + (sps // 2 if fmt is ModFormat.OQPSK else 0)
    if d < 0 or last >= len(x):
        raise ValueError("signal too short for requested symbol count")
    idx = d + np.arange(n_symbols) * sps
    if fmt is ModFormat.QPSK:
        raw = x[idx]
    else:
        raw = x[idx].real + 1j * x[idx + sps // 2].imag

    # Decision-directed gain fit: hard decisions depend only on quadrant
    # signs, so provisional decisions need no pre-scaling.
    if not np.any(raw):
        raise ValueError("all-zero symbol samples")
    provisional = decide_symbols(raw)
    gain = align(raw, provisional)
    measured = gain * raw
    decided = decide_symbols(measured)
    return RxResult(
        measured_symbols=measured,
        decided_symbols=decided,
        decided_bits=unmap_symbols(decided),
        applied_gain=complex(gain),
    )


def build_frame(
    bits, fmt: ModFormat, filt: FirFilter, symbol_rate_hz: float
) -> TxFrame:
    """Map bits and synthesize the shaped baseband signal in one step."""
    stream = map_symbols(bits, fmt)
    stream = SymbolStream(stream.symbols, symbol_rate_hz)
    signal = modulate_baseband(stream, fmt, filt)
    return TxFrame(
        bits=as_bits(bits),
        symbols=stream,
        signal=signal,
        filter=filt,
        format=fmt,
        samples_per_symbol=filt.samples_per_symbol,
    )
