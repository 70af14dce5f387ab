"""Deterministic pseudo-noise bit generation from a Fibonacci LFSR.

The default configuration is the degree-6 maximal-length register with
feedback polynomial x^6 + x + 1 and an all-ones seed, which produces the
classic period-63 m-sequence.  Polynomial, seed, and topology are exposed
as metadata so downstream results stay reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import as_bits

#: Fixed topology label recorded in run metadata.
TOPOLOGY = "fibonacci"


@dataclass(frozen=True)
class LfsrConfig:
    """Fibonacci (external-XOR) LFSR.

    `taps` lists the feedback polynomial exponents; the leading x^degree
    term and the constant term are implicit, so the register realizes the
    recurrence  b[n+degree] = b[n] XOR b[n+e]  for each listed e < degree.
    The register holds the next `degree` output bits; each step emits the
    LSB and shifts the freshly computed feedback bit in at the top.
    """

    degree: int = 6
    taps: tuple[int, ...] = (6, 1)
    seed: int = 0b111111

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("degree must be positive")
        if self.seed == 0:
            raise ValueError("degenerate LFSR seed")
        if not 0 < self.seed < (1 << self.degree):
            raise ValueError("seed must be a nonzero pattern of `degree` bits")
        if any(not 1 <= t <= self.degree for t in self.taps):
            raise ValueError("tap exponents must lie in 1..degree")

    def polynomial_str(self) -> str:
        exps = sorted({self.degree, *self.taps}, reverse=True)
        terms = ["x" if e == 1 else f"x^{e}" for e in exps] + ["1"]
        return " + ".join(terms)


def generate_pn(config: LfsrConfig, n_bits: int) -> np.ndarray:
    """First `n_bits` of the LFSR output sequence.

    Deterministic for a fixed config; generate_pn(c, n) is always a prefix
    of generate_pn(c, m) for n <= m.  The register is stepped until its
    state cycles (at most 2^degree - 1 steps) and the emitted period is
    tiled, so long stimulus records stay cheap.
    """
    if n_bits < 1:
        raise ValueError("n_bits must be at least 1")
    state = config.seed
    mask = (1 << config.degree) - 1
    mid_taps = [t for t in config.taps if t < config.degree]
    period_bits: list[int] = []
    while len(period_bits) < n_bits:
        period_bits.append(state & 1)
        fb = state & 1
        for t in mid_taps:
            fb ^= (state >> t) & 1
        state = ((state >> 1) | (fb << (config.degree - 1))) & mask
        if state == config.seed:
            break
    out = np.resize(np.array(period_bits, dtype=np.uint8), n_bits)
    return as_bits(out)
