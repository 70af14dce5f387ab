"""PSD estimation, occupied bandwidth, and bandwidth efficiency."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from basebandlab import (
    FilterKind,
    IqSignal,
    ModFormat,
    PsdEstimate,
    bandwidth_efficiency,
    design_fir,
    mean_power,
    occupied_bandwidth,
    welch_psd,
)
from basebandlab.modem import build_frame
from basebandlab.pn import LfsrConfig, generate_pn
from basebandlab.spectrum import write_psd_csv


def test_tone_lands_in_its_bin():
    fs, f0, n = 1024.0, 128.0, 8192
    t = np.arange(n) / fs
    sig = IqSignal(np.exp(2j * np.pi * f0 * t), fs)
    psd = welch_psd(sig, segment_len=512, overlap_fraction=0.5)
    peak = psd.freqs_hz[int(np.argmax(psd.density))]
    assert peak == pytest.approx(f0, abs=psd.resolution_hz / 2)


def test_white_noise_is_flat():
    rng = np.random.default_rng(29)
    n = 800_000
    samples = (rng.normal(size=n) + 1j * rng.normal(size=n)) / np.sqrt(2.0)
    sig = IqSignal(samples, 2000.0)
    psd = welch_psd(sig, segment_len=256, overlap_fraction=0.0)
    expected = 1.0 / sig.sample_rate_hz
    np.testing.assert_allclose(psd.density, expected, rtol=0.10)


@pytest.mark.parametrize("fmt", (ModFormat.QPSK, ModFormat.OQPSK))
def test_parseval_consistency(fmt):
    bits = generate_pn(LfsrConfig(), 2 * 3000)
    filt = design_fir(FilterKind.ROOT_RAISED_COSINE, 0.35, 16, 16)
    frame = build_frame(bits, fmt, filt, 25e3)
    psd = welch_psd(frame.signal, segment_len=4096, overlap_fraction=0.5)
    assert psd.total_power() == pytest.approx(mean_power(frame.signal), rel=0.02)


def test_welch_validations():
    sig = IqSignal(np.ones(1000, dtype=complex), 1.0)
    with pytest.raises(ValueError):
        welch_psd(sig, segment_len=2048)  # longer than signal
    with pytest.raises(ValueError):
        welch_psd(sig, segment_len=100)  # not a power of two
    with pytest.raises(ValueError):
        welch_psd(sig, segment_len=256, overlap_fraction=1.0)


def _flat_psd(width_hz, level=1.0, df=1.0, span_hz=4000.0):
    # bins are rectangles of width df, so occupancy runs center +/- df/2
    freqs = np.arange(-span_hz / 2, span_hz / 2, df)
    density = np.where(np.abs(freqs) <= (width_hz - df) / 2, level, 0.0)
    return PsdEstimate(freqs_hz=freqs, density=density, resolution_hz=df)


def test_brick_wall_occupied_bandwidth():
    psd = _flat_psd(width_hz=1000.0)
    covered = np.count_nonzero(psd.density) * psd.resolution_hz
    assert occupied_bandwidth(psd, 0.99) == pytest.approx(0.99 * covered, rel=1e-9)


def test_occupied_bandwidth_monotone_in_fraction():
    psd = _flat_psd(width_hz=1200.0)
    obws = [occupied_bandwidth(psd, fr) for fr in (0.5, 0.9, 0.95, 0.99, 0.999)]
    assert all(a <= b for a, b in zip(obws, obws[1:]))


@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_occupied_bandwidth_monotone_on_random_psd(seed):
    rng = np.random.default_rng(seed)
    density = rng.uniform(0.0, 1.0, 128) ** 4  # spiky, partly near-zero
    density[rng.integers(0, 128)] += 5.0
    psd = PsdEstimate(
        freqs_hz=np.arange(128, dtype=float) - 64.0,
        density=density,
        resolution_hz=1.0,
    )
    obws = [occupied_bandwidth(psd, fr) for fr in (0.2, 0.5, 0.9, 0.99)]
    assert all(a <= b for a, b in zip(obws, obws[1:]))
    assert obws[-1] <= 128.0


def test_occupied_bandwidth_validations():
    psd = _flat_psd(width_hz=100.0)
    with pytest.raises(ValueError):
        occupied_bandwidth(psd, 1.0)
    zero = PsdEstimate(
        freqs_hz=np.array([-1.0, 0.0, 1.0]),
        density=np.zeros(3),
        resolution_hz=1.0,
    )
    with pytest.raises(ValueError):
        occupied_bandwidth(zero)


def _analytic_obw(kind, alpha, symbol_rate, fraction=0.99):
    # independent oracle: integrate the closed-form shaped-signal spectrum
    # (|G_rc|^2 for a full raised-cosine transmit pulse, G_rc for its root)
    from basebandlab import rc_freq_response

    edge = (1 + alpha) * symbol_rate / 2
    f = np.linspace(0.0, edge, 200_001)
    g = rc_freq_response(f, alpha, symbol_rate)
    s = g**2 if kind is FilterKind.RAISED_COSINE else g
    cum = np.concatenate([[0.0], np.cumsum((s[1:] + s[:-1]) / 2)])
    half_target = fraction * cum[-1]  # one-sided: half the power, symmetric
    return 2 * np.interp(half_target, cum, f)


@pytest.mark.parametrize(
    "kind,alpha",
    [(FilterKind.RAISED_COSINE, 0.35), (FilterKind.ROOT_RAISED_COSINE, 1.0)],
)
def test_simulated_obw_matches_quadrature_oracle(kind, alpha):
    bits = generate_pn(LfsrConfig(), 2 * 9000)
    filt = design_fir(kind, alpha, 16, 16)
    frame = build_frame(bits, ModFormat.QPSK, filt, 25e3)
    psd = welch_psd(frame.signal, segment_len=4096, overlap_fraction=0.5)
    simulated = occupied_bandwidth(psd, 0.99)
    analytic = _analytic_obw(kind, alpha, 25e3)
    assert simulated == pytest.approx(analytic, rel=0.03)


def test_bandwidth_efficiency_table_values():
    # 50 kbps over the published occupied bandwidths
    assert bandwidth_efficiency(50_000, 24_780) == pytest.approx(2.018, abs=5e-4)
    assert round(bandwidth_efficiency(50_000, 33_110), 2) == 1.51


def test_bandwidth_efficiency_unity_and_errors():
    assert bandwidth_efficiency(123.0, 123.0) == 1.0
    with pytest.raises(ValueError):
        bandwidth_efficiency(0.0, 1.0)
    with pytest.raises(ValueError):
        bandwidth_efficiency(1.0, 0.0)


def test_psd_invariants():
    with pytest.raises(ValueError):
        PsdEstimate(
            freqs_hz=np.array([0.0, 1.0]),
            density=np.array([1.0, -0.5]),
            resolution_hz=1.0,
        )


def test_psd_csv(tmp_path):
    psd = _flat_psd(width_hz=10.0, df=5.0, span_hz=40.0)
    path = tmp_path / "psd.csv"
    write_psd_csv(psd, path)
    lines = path.read_text().strip().split("\n")
    assert lines[0] == "freq_hz,density"
    assert len(lines) == 1 + len(psd.freqs_hz)
