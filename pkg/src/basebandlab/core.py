"""Core value types shared by every stage of the baseband lab.

All signal data is carried as immutable numpy arrays at double precision;
single precision only ever appears at the IQ capture file boundary.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

SQRT2 = np.sqrt(2.0)

#: Gray-mapped QPSK constellation, indexed by (b_i << 1) | b_q.
#: 00 -> (+1+j)/sqrt(2), 01 -> (+1-j)/sqrt(2), 10 -> (-1+j)/sqrt(2), 11 -> (-1-j)/sqrt(2)
QPSK_CONSTELLATION = np.array(
    [1.0 + 1.0j, 1.0 - 1.0j, -1.0 + 1.0j, -1.0 - 1.0j], dtype=np.complex128
) / SQRT2


class ModFormat(enum.Enum):
    QPSK = "QPSK"
    OQPSK = "OQPSK"


class FilterKind(enum.Enum):
    RAISED_COSINE = "rc"
    ROOT_RAISED_COSINE = "rrc"


class Normalization(enum.Enum):
    UNIT_PEAK = "peak"
    UNIT_ENERGY = "energy"
    UNIT_DC_GAIN = "dc"


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.asarray(values, dtype=dtype)
    if arr.ndim != 1:
        raise ValueError("expected a one-dimensional sample sequence")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


def validate_rolloff(alpha: float) -> float:
    """Validate a roll-off (excess bandwidth) factor, 0 <= alpha <= 1."""
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"roll-off factor must be in [0, 1], got {alpha}")
    return alpha


def as_bits(bits) -> np.ndarray:
    """Coerce a bit sequence to a uint8 array, rejecting values outside {0, 1}."""
    arr = np.asarray(bits)
    if arr.ndim != 1:
        raise ValueError("bit stream must be one-dimensional")
    if arr.size and not np.all((arr == 0) | (arr == 1)):
        raise ValueError("bit stream elements must be 0 or 1")
    out = arr.astype(np.uint8)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class IqSignal:
    """Complex baseband sample sequence with its sample rate."""

    samples: np.ndarray
    sample_rate_hz: float

    def __post_init__(self):
        object.__setattr__(self, "samples", _frozen_array(self.samples, np.complex128))
        if not self.sample_rate_hz > 0:
            raise ValueError("sample_rate_hz must be positive")

    def __len__(self) -> int:
        return len(self.samples)


@dataclass(frozen=True)
class SymbolStream:
    """Complex constellation symbols at the symbol rate F = 1/T."""

    symbols: np.ndarray
    symbol_rate_hz: float

    def __post_init__(self):
        object.__setattr__(self, "symbols", _frozen_array(self.symbols, np.complex128))
        if not self.symbol_rate_hz > 0:
            raise ValueError("symbol_rate_hz must be positive")

    def __len__(self) -> int:
        return len(self.symbols)


def mean_power(signal: IqSignal | np.ndarray) -> float:
    """Mean of |sample|^2 over all samples."""
    samples = signal.samples if isinstance(signal, IqSignal) else np.asarray(signal)
    if len(samples) == 0:
        raise ValueError("empty signal")
    return float(np.mean(np.abs(samples) ** 2))


def scale_to_unit_power(signal: IqSignal) -> IqSignal:
    """Scale by a positive real factor so that mean power is exactly one."""
    p = mean_power(signal)
    if p <= 0.0:
        raise ValueError("zero-power signal cannot be normalized")
    return IqSignal(signal.samples / np.sqrt(p), signal.sample_rate_hz)
