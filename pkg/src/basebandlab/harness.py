"""Full factorial sweep over modulation format, filter kind, and roll-off.

Each sweep point runs three legs:

* metrics — noiseless loopback at the configured filter profile; EVM,
  magnitude error, and phase error at symbol instants after edge exclusion.
* ber — Monte-Carlo loopback through AWGN with matched (same-kind,
  unit-energy) transmit and receive filters at the configured profile.
* obw — 99% occupied bandwidth of a long near-ideal transmit record;
  short instrument-style filters are never used here because occupied
  bandwidth models the shaped spectrum, not the shaping error.

The `vsg8` profile emulates the instrument's crude eight-tap shaping
(quarter-symbol pitch, half-sample straddle); `long` is the near-ideal
span-16, 16-samples-per-symbol design.  Measurement-filter pairing for the
metrics leg is `off` for raised-cosine transmit and a long root-raised-
cosine for root-raised-cosine transmit, giving a raised-cosine-equivalent
cascade; the choice is recorded in run metadata.

All randomness derives from `master_seed` and the point identity, so a
sweep is reproducible byte-for-byte.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .channel import RNG_ID, ChannelConfig, awgn
from .core import (
    FilterKind,
    ModFormat,
    Normalization,
    SymbolStream,
    mean_power,
)
from .metrics import ErrorSummary, bit_error_rate, build_reference, error_metrics
from .modem import demodulate, map_symbols, modulate_baseband
from .pn import TOPOLOGY, LfsrConfig, generate_pn
from .pulseshape import FirFilter, design_fir, eight_tap_truncated_fir
from .spectrum import bandwidth_efficiency, occupied_bandwidth, welch_psd

RESULT_CSV_HEADER = (
    "format,filter,alpha,evm_pct_rms,mag_err_pct_rms,"
    "phase_err_deg_rms,ber,obw_hz,bw_eff_bps_per_hz"
)

DEFAULT_ALPHAS = (0.1, 0.22, 0.35, 0.7, 1.0)

_FMT_NAMES = {ModFormat.QPSK: "QPSK", ModFormat.OQPSK: "OQPSK"}
_KIND_NAMES = {FilterKind.RAISED_COSINE: "rc", FilterKind.ROOT_RAISED_COSINE: "rrc"}


@dataclass(frozen=True)
class FilterProfile:
    """Shaping-filter profile: `vsg8` (crude 8-tap) or `long` (near-ideal)."""

    name: str = "vsg8"
    span_symbols: int = 16
    samples_per_symbol: int = 16

    def __post_init__(self):
        if self.name not in ("vsg8", "long"):
            raise ValueError("profile name must be 'vsg8' or 'long'")

    def tx_filter(self, kind: FilterKind, alpha: float) -> FirFilter:
        if self.name == "vsg8":
            return eight_tap_truncated_fir(kind, alpha)
        return design_fir(kind, alpha, self.samples_per_symbol, self.span_symbols)

    @property
    def sps(self) -> int:
        return 4 if self.name == "vsg8" else self.samples_per_symbol


@dataclass(frozen=True)
class SweepConfig:
    formats: tuple[ModFormat, ...] = (ModFormat.QPSK, ModFormat.OQPSK)
    filter_kinds: tuple[FilterKind, ...] = (
        FilterKind.RAISED_COSINE,
        FilterKind.ROOT_RAISED_COSINE,
    )
    alphas: tuple[float, ...] = DEFAULT_ALPHAS
    symbol_rate_hz: float = 25_000.0
    n_symbols: int = 256
    filter_profile: FilterProfile = field(default_factory=FilterProfile)
    ebn0_db: float | None = 6.0
    n_ber_bits: int = 1_000_000
    n_obw_symbols: int = 9_000
    master_seed: int = 0
    pn: LfsrConfig = field(default_factory=LfsrConfig)

    def __post_init__(self):
        if not self.alphas:
            raise ValueError("alphas must be non-empty")
        for a in self.alphas:
            if not 0.0 <= a <= 1.0:
                raise ValueError(f"alpha {a} outside [0, 1]")
        if self.n_symbols < 64:
            raise ValueError("n_symbols must be at least 64")

    @property
    def bit_rate_bps(self) -> float:
        return 2.0 * self.symbol_rate_hz


@dataclass(frozen=True)
class MetricsRecord:
    format: ModFormat
    filter_kind: FilterKind
    alpha: float
    errors: ErrorSummary
    ber: float
    obw_hz: float
    bw_efficiency: float
    metadata: dict


def _point_seed(master_seed: int, point_index: int, leg: int) -> int:
    seq = np.random.SeedSequence(entropy=(master_seed, point_index, leg))
    return int(seq.generate_state(1)[0])


def _pn_symbols(cfg: SweepConfig, n_symbols: int) -> SymbolStream:
    bits = generate_pn(cfg.pn, 2 * n_symbols)
    stream = map_symbols(bits, ModFormat.QPSK)
    return SymbolStream(stream.symbols, cfg.symbol_rate_hz)


def measurement_filter_for(
    kind: FilterKind, alpha: float, sps: int, span: int = 16
) -> FirFilter | None:
    """Metrics-leg measurement filter: off for RC transmit, long RRC for
    RRC transmit (raised-cosine-equivalent cascade)."""
    if kind is FilterKind.RAISED_COSINE:
        return None
    return design_fir(FilterKind.ROOT_RAISED_COSINE, alpha, sps, span)


def _edge_exclusion(tx: FirFilter, mf: FirFilter | None) -> int:
    excl = math.ceil(tx.span_symbols / 2.0)
    if mf is not None:
        excl += math.ceil(mf.span_symbols / 2.0)
    return excl


def _metrics_leg(cfg: SweepConfig, fmt: ModFormat, kind: FilterKind, alpha: float):
    tx_filter = cfg.filter_profile.tx_filter(kind, alpha)
    sps = tx_filter.samples_per_symbol
    mf = measurement_filter_for(kind, alpha, sps)
    excl = _edge_exclusion(tx_filter, mf)
    n_total = cfg.n_symbols + 2 * excl
    stream = _pn_symbols(cfg, n_total)
    signal = modulate_baseband(stream, fmt, tx_filter)
    rx = demodulate(signal, fmt, mf, sps, n_total, tx_filter.group_delay_samples)
    sl = slice(excl, n_total - excl)
    reference = build_reference(rx.decided_symbols[sl])
    summary = error_metrics(rx.measured_symbols[sl], reference, pre_align=True)
    return summary, excl


def _ber_leg(cfg: SweepConfig, fmt: ModFormat, kind: FilterKind, alpha: float, seed: int):
    profile = cfg.filter_profile
    if profile.name == "vsg8":
        tx = eight_tap_truncated_fir(kind, alpha)
        taps = tx.taps / np.sqrt(np.sum(tx.taps**2))
        tx = FirFilter(taps, tx.samples_per_symbol, kind, alpha,
                       tx.span_symbols, Normalization.UNIT_ENERGY)
    else:
        tx = design_fir(kind, alpha, profile.samples_per_symbol,
                        profile.span_symbols, Normalization.UNIT_ENERGY)
    # Eb/N0 calibration requires unit pulse energy at both ends.
    assert abs(np.sum(tx.taps**2) - 1.0) < 1e-9
    rx = tx
    sps = tx.samples_per_symbol

    n_symbols = max(64, cfg.n_ber_bits // 2)
    excl = _edge_exclusion(tx, rx)
    n_total = n_symbols + 2 * excl
    bits = generate_pn(cfg.pn, 2 * n_total)
    stream = map_symbols(bits, ModFormat.QPSK)
    stream = SymbolStream(stream.symbols, cfg.symbol_rate_hz)
    signal = modulate_baseband(stream, fmt, tx)
    channel_cfg = ChannelConfig(
        ebn0_db=cfg.ebn0_db, samples_per_symbol=sps, seed=seed
    )
    noisy = awgn(signal, channel_cfg, mean_power(signal))
    rx_result = demodulate(noisy, fmt, rx, sps, n_total, tx.group_delay_samples)
    sl = slice(2 * excl, 2 * (n_total - excl))
    report = bit_error_rate(bits[sl], rx_result.decided_bits[sl])
    return report, channel_cfg


def _obw_leg(cfg: SweepConfig, fmt: ModFormat, kind: FilterKind, alpha: float):
    profile = cfg.filter_profile
    if profile.name == "long":
        sps, span = profile.samples_per_symbol, profile.span_symbols
    else:
        sps, span = 16, 16
    tx = design_fir(kind, alpha, sps, span, Normalization.UNIT_ENERGY)
    stream = _pn_symbols(cfg, cfg.n_obw_symbols)
    signal = modulate_baseband(stream, fmt, tx)
    psd = welch_psd(signal, segment_len=4096, overlap_fraction=0.5, window="hann")
    obw = occupied_bandwidth(psd, fraction=0.99)
    return obw, len(signal)


def run_point(
    cfg: SweepConfig, fmt: ModFormat, kind: FilterKind, alpha: float,
    point_index: int = 0,
) -> MetricsRecord:
    """Execute pn -> map -> modulate -> channel -> demodulate -> metrics ->
    spectrum for one (format, filter kind, alpha) sweep point."""
    summary, excl = _metrics_leg(cfg, fmt, kind, alpha)
    ber_seed = _point_seed(cfg.master_seed, point_index, 1)
    ber_report, channel_cfg = _ber_leg(cfg, fmt, kind, alpha, ber_seed)
    obw, obw_len = _obw_leg(cfg, fmt, kind, alpha)
    eff = bandwidth_efficiency(cfg.bit_rate_bps, obw)
    metadata = {
        "point_index": point_index,
        "profile": cfg.filter_profile.name,
        "measurement_filter": "off" if kind is FilterKind.RAISED_COSINE else "rrc",
        "edge_exclusion_symbols": excl,
        "metric_symbols": summary.n_symbols,
        "ber_bits": ber_report["total"],
        "ber_seed": ber_seed,
        "ebn0_db": cfg.ebn0_db,
        "rng_id": channel_cfg.rng_id,
        "obw_record_samples": obw_len,
    }
    return MetricsRecord(
        format=fmt,
        filter_kind=kind,
        alpha=alpha,
        errors=summary,
        ber=ber_report["ber"],
        obw_hz=obw,
        bw_efficiency=eff,
        metadata=metadata,
    )


def _run_point_indexed(args) -> MetricsRecord:
    cfg, fmt, kind, alpha, idx = args
    return run_point(cfg, fmt, kind, alpha, idx)


def sweep_points(cfg: SweepConfig):
    """Deterministic point order: format, then kind, then ascending alpha."""
    idx = 0
    for fmt in cfg.formats:
        for kind in cfg.filter_kinds:
            for alpha in sorted(cfg.alphas):
                yield fmt, kind, alpha, idx
                idx += 1


def run_sweep(cfg: SweepConfig, workers: int = 1) -> list[MetricsRecord]:
    """All |formats| x |kinds| x |alphas| records in deterministic order."""
    jobs = [(cfg, fmt, kind, alpha, idx) for fmt, kind, alpha, idx in sweep_points(cfg)]
    if workers <= 1 or len(jobs) <= 1:
        return [_run_point_indexed(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
        return list(pool.map(_run_point_indexed, jobs))


def default_workers() -> int:
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# Result emission


def _fnum(x: float) -> str:
    return f"{x:.9g}"


def results_csv_text(records: list[MetricsRecord]) -> str:
    lines = [RESULT_CSV_HEADER]
    for r in records:
        lines.append(
            ",".join(
                [
                    _FMT_NAMES[r.format],
                    _KIND_NAMES[r.filter_kind],
                    _fnum(r.alpha),
                    _fnum(r.errors.evm_pct_rms),
                    _fnum(r.errors.mag_err_pct_rms),
                    _fnum(r.errors.phase_err_deg_rms),
                    _fnum(r.ber),
                    _fnum(r.obw_hz),
                    _fnum(r.bw_efficiency),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def metadata_json_text(cfg: SweepConfig, records: list[MetricsRecord]) -> str:
    doc = {
        "software": {"name": "basebandlab", "version": __version__},
        "config": {
            "formats": [_FMT_NAMES[f] for f in cfg.formats],
            "filter_kinds": [_KIND_NAMES[k] for k in cfg.filter_kinds],
            "alphas": sorted(cfg.alphas),
            "symbol_rate_hz": cfg.symbol_rate_hz,
            "n_symbols": cfg.n_symbols,
            "filter_profile": asdict(cfg.filter_profile),
            "ebn0_db": cfg.ebn0_db,
            "n_ber_bits": cfg.n_ber_bits,
            "n_obw_symbols": cfg.n_obw_symbols,
            "master_seed": cfg.master_seed,
        },
        "pn_source": {
            "polynomial": cfg.pn.polynomial_str(),
            "degree": cfg.pn.degree,
            "seed": cfg.pn.seed,
            "topology": TOPOLOGY,
        },
        "rng_id": RNG_ID,
        "symbol_map": "gray: 00->(+1+j)/sqrt2, 01->(+1-j)/sqrt2, "
                      "10->(-1+j)/sqrt2, 11->(-1-j)/sqrt2",
        "measurement_pairing": "off<->rc-transmit, rrc<->rrc-transmit",
        "points": [
            {
                "format": _FMT_NAMES[r.format],
                "filter": _KIND_NAMES[r.filter_kind],
                "alpha": r.alpha,
                **r.metadata,
            }
            for r in records
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


_METRIC_GETTERS = {
    "evm_pct_rms": lambda r: r.errors.evm_pct_rms,
    "mag_err_pct_rms": lambda r: r.errors.mag_err_pct_rms,
    "phase_err_deg_rms": lambda r: r.errors.phase_err_deg_rms,
    "ber": lambda r: r.ber,
    "bw_eff_bps_per_hz": lambda r: r.bw_efficiency,
}

_FIGURE_FILES = {
    "fig4_evm.csv": "evm_pct_rms",
    "fig5_mag_err.csv": "mag_err_pct_rms",
    "fig6_phase_err.csv": "phase_err_deg_rms",
    "fig7_bw_eff.csv": "bw_eff_bps_per_hz",
    "fig8_ber.csv": "ber",
}


def best_choice_summary(records: list[MetricsRecord]) -> dict:
    """Per-metric argbest points.

    Error metrics and BER are minimized over all records; bandwidth
    efficiency is maximized over alpha <= 0.35 only, mirroring the
    selection logic behind the published comparison.  Exact ties are
    reported as lists, never broken silently.
    """
    if not records:
        raise ValueError("no records to summarize")

    def argbest(metric: str, records_in, best=min):
        get = _METRIC_GETTERS[metric]
        target = best(get(r) for r in records_in)
        winners = [
            (_FMT_NAMES[r.format], _KIND_NAMES[r.filter_kind], r.alpha)
            for r in records_in
            if get(r) == target
        ]
        return {"value": target, "winners": winners}

    eff_records = [r for r in records if r.alpha <= 0.35] or records
    return {
        "evm_pct_rms": argbest("evm_pct_rms", records),
        "mag_err_pct_rms": argbest("mag_err_pct_rms", records),
        "phase_err_deg_rms": argbest("phase_err_deg_rms", records),
        "ber": argbest("ber", records),
        "bw_eff_bps_per_hz": argbest("bw_eff_bps_per_hz", eff_records, best=max),
    }


def best_choice_text(summary: dict) -> str:
    lines = ["metric | best choice | value"]
    for metric, entry in summary.items():
        winners = "; ".join(
            f"{fmt} with {kind} filter (alpha={_fnum(alpha)})"
            for fmt, kind, alpha in entry["winners"]
        )
        lines.append(f"{metric} | {winners} | {_fnum(entry['value'])}")
    return "\n".join(lines) + "\n"


def figure_csv_text(records: list[MetricsRecord], metric: str) -> str:
    """Plot data: one row per alpha, one column per format x filter series."""
    alphas = sorted({r.alpha for r in records})
    series = []
    for fmt in (ModFormat.QPSK, ModFormat.OQPSK):
        for kind in (FilterKind.RAISED_COSINE, FilterKind.ROOT_RAISED_COSINE):
            pts = {
                r.alpha: _METRIC_GETTERS[metric](r)
                for r in records
                if r.format is fmt and r.filter_kind is kind
            }
            if pts:
                name = f"{_FMT_NAMES[fmt].lower()}_{_KIND_NAMES[kind]}"
                series.append((name, pts))
    lines = ["alpha," + ",".join(name for name, _ in series)]
    for a in alphas:
        row = [_fnum(a)]
        for _, pts in series:
            row.append(_fnum(pts[a]) if a in pts else "")
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def write_sweep_outputs(cfg: SweepConfig, records: list[MetricsRecord], out_dir) -> list[str]:
    """Write results CSV, metadata JSON, per-figure plot data, and the
    best-choice table.  Returns the written file names."""
    os.makedirs(out_dir, exist_ok=True)
    written = []

    def emit(name: str, text: str):
        path = os.path.join(out_dir, name)
        with open(path, "w", encoding="ascii") as fh:
            fh.write(text)
        written.append(name)

    emit("results.csv", results_csv_text(records))
    emit("run_meta.json", metadata_json_text(cfg, records))
    for fname, metric in _FIGURE_FILES.items():
        emit(fname, figure_csv_text(records, metric))
    emit("table3_summary.txt", best_choice_text(best_choice_summary(records)))
    return written
