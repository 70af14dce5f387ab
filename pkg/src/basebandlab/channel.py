"""Additive white Gaussian noise at a specified Eb/N0, plus deliberate
gain/phase impairments used to validate the metric engine.

The per-sample noise variance assumes unit-energy pulse normalization on
the transmit/receive cascade, which makes the matched-filter decision
point obey the textbook Q-function BER; the sweep harness asserts that
normalization before any BER run.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import IqSignal

#: Generator and Gaussian draw method, recorded in run metadata: golden BER
#: numbers are statistical, so the stream source must be named.
RNG_ID = "numpy-pcg64-ziggurat"


@dataclass(frozen=True)
class ChannelConfig:
    ebn0_db: float | None
    samples_per_symbol: int
    seed: int = 0
    bits_per_symbol: int = 2
    rng_id: str = RNG_ID

    def __post_init__(self):
        if self.bits_per_symbol < 1:
            raise ValueError("bits_per_symbol must be positive")
        if self.samples_per_symbol < 1:
            raise ValueError("samples_per_symbol must be positive")


def noise_variance(config: ChannelConfig, signal_power: float) -> float:
    """Per-sample complex noise variance sigma^2 for the configured Eb/N0."""
    if signal_power <= 0:
        raise ValueError("signal_power must be positive")
    if config.ebn0_db is None:
        return 0.0
    ebn0 = 10.0 ** (config.ebn0_db / 10.0)
    return signal_power * config.samples_per_symbol / (config.bits_per_symbol * ebn0)


def awgn(signal: IqSignal, config: ChannelConfig, signal_power: float) -> IqSignal:
    """Add circularly-symmetric complex Gaussian noise.

    sigma^2 = signal_power * sps / (bits_per_symbol * 10^(ebn0/10)), split
    equally between I and Q.  Deterministic for a fixed (seed, rng_id);
    ebn0_db of None is a noiseless passthrough.
    """
    sigma2 = noise_variance(config, signal_power)
    if sigma2 == 0.0:
        return signal
    rng = np.random.default_rng(config.seed)
    scale = np.sqrt(sigma2 / 2.0)
    noise = rng.normal(0.0, scale, size=(len(signal), 2))
    return IqSignal(
        signal.samples + noise[:, 0] + 1j * noise[:, 1], signal.sample_rate_hz
    )


def impair(signal: IqSignal, gain: float, phase_deg: float) -> IqSignal:
    """Multiply every sample by gain * exp(j * phase)."""
    if gain <= 0:
        raise ValueError("gain must be positive")
    rot = gain * np.exp(1j * np.deg2rad(phase_deg))
    return IqSignal(signal.samples * rot, signal.sample_rate_hz)
