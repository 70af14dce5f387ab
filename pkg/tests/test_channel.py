"""AWGN channel and deliberate impairments."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from basebandlab import ChannelConfig, IqSignal, awgn, impair, mean_power
from basebandlab.channel import noise_variance


def _unit_signal(n, rate=8.0):
    return IqSignal(np.ones(n, dtype=complex), rate)


def test_noiseless_passthrough():
    sig = _unit_signal(100)
    cfg = ChannelConfig(ebn0_db=None, samples_per_symbol=8, seed=1)
    out = awgn(sig, cfg, mean_power(sig))
    np.testing.assert_array_equal(out.samples, sig.samples)


def test_variance_matches_formula():
    n = 1_000_000
    sig = IqSignal(np.zeros(n, dtype=complex), 8.0)
    cfg = ChannelConfig(ebn0_db=6.0, samples_per_symbol=8, seed=3)
    sigma2 = noise_variance(cfg, 1.0)
    assert sigma2 == pytest.approx(8 / (2 * 10**0.6), rel=1e-12)
    out = awgn(sig, cfg, 1.0)
    measured = np.mean(np.abs(out.samples) ** 2)
    assert measured == pytest.approx(sigma2, rel=0.02)


def test_noise_component_statistics():
    n = 1_000_000
    sig = IqSignal(np.zeros(n, dtype=complex), 8.0)
    cfg = ChannelConfig(ebn0_db=3.0, samples_per_symbol=4, seed=9)
    sigma2 = noise_variance(cfg, 1.0)
    out = awgn(sig, cfg, 1.0)
    for comp in (out.samples.real, out.samples.imag):
        assert abs(np.mean(comp)) < 4 * np.sqrt(sigma2 / 2) / np.sqrt(n)
        assert np.var(comp) == pytest.approx(sigma2 / 2, rel=0.02)


def test_same_seed_bit_identical():
    sig = _unit_signal(512)
    cfg = ChannelConfig(ebn0_db=6.0, samples_per_symbol=8, seed=7)
    a = awgn(sig, cfg, 1.0)
    b = awgn(sig, cfg, 1.0)
    np.testing.assert_array_equal(a.samples, b.samples)


def test_awgn_rejects_nonpositive_power():
    sig = _unit_signal(16)
    cfg = ChannelConfig(ebn0_db=6.0, samples_per_symbol=8, seed=7)
    with pytest.raises(ValueError):
        awgn(sig, cfg, 0.0)


def test_impair_identity():
    sig = _unit_signal(8)
    out = impair(sig, 1.0, 0.0)
    np.testing.assert_allclose(out.samples, sig.samples, atol=1e-15)


def test_impair_quarter_turn():
    out = impair(IqSignal([1 + 0j], 1.0), 1.0, 90.0)
    np.testing.assert_allclose(out.samples, [1j], atol=1e-15)


def test_impair_gain_squares_power():
    sig = _unit_signal(32)
    out = impair(sig, 2.0, 0.0)
    assert mean_power(out) == pytest.approx(4 * mean_power(sig), rel=1e-12)


def test_impair_rejects_nonpositive_gain():
    with pytest.raises(ValueError):
        impair(_unit_signal(4), 0.0, 10.0)


@given(
    st.floats(min_value=0.1, max_value=10),
    st.floats(min_value=-180, max_value=180),
)
def test_impair_roundtrip(gain, phase):
    sig = IqSignal([1 + 2j, -0.5 + 0.25j, 3 - 1j], 1.0)
    out = impair(impair(sig, gain, phase), 1 / gain, -phase)
    np.testing.assert_allclose(out.samples, sig.samples, atol=1e-12)


def test_config_validation():
    with pytest.raises(ValueError):
        ChannelConfig(ebn0_db=6.0, samples_per_symbol=0)
    with pytest.raises(ValueError):
        ChannelConfig(ebn0_db=6.0, samples_per_symbol=8, bits_per_symbol=0)
