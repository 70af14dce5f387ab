"""Command-line surface: filter design, modulation, analysis, sweeps, PSD.

One multi-command tool for batch use.  Exit codes: 0 success, 2 argument
validation, 3 capture corruption, 1 other IO/runtime failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .core import (
    FilterKind,
    ModFormat,
    Normalization,
    SymbolStream,
    as_bits,
    mean_power,
)
from .harness import (
    FilterProfile,
    SweepConfig,
    default_workers,
    measurement_filter_for,
    run_sweep,
    write_sweep_outputs,
)
from .iqfile import CaptureError, read_capture, write_capture
from .metrics import bit_error_rate, build_reference, error_metrics
from .modem import demodulate, map_symbols, modulate_baseband
from .pn import LfsrConfig, generate_pn
from .pulseshape import design_fir, vsg_reference_taps, write_taps_csv
from .spectrum import occupied_bandwidth, welch_psd, write_psd_csv

_KINDS = {"rc": FilterKind.RAISED_COSINE, "rrc": FilterKind.ROOT_RAISED_COSINE}
_FORMATS = {"qpsk": ModFormat.QPSK, "oqpsk": ModFormat.OQPSK}
_NORMS = {
    "peak": Normalization.UNIT_PEAK,
    "energy": Normalization.UNIT_ENERGY,
    "dc": Normalization.UNIT_DC_GAIN,
}


def _write_bits(bits, path):
    with open(path, "w", encoding="ascii") as fh:
        fh.write("".join(str(int(b)) for b in bits) + "\n")


def _read_bits(path):
    with open(path, "r", encoding="ascii") as fh:
        text = "".join(fh.read().split())
    return as_bits(np.array([int(c) for c in text], dtype=np.uint8))


def _json_out(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _cmd_design_filter(args) -> int:
    if args.vsg8:
        filt = vsg_reference_taps(_KINDS[args.kind])
    else:
        filt = design_fir(
            _KINDS[args.kind], args.alpha, args.sps, args.span, _NORMS[args.normalization]
        )
    write_taps_csv(filt, args.out)
    print(f"wrote {filt.n_taps} taps to {args.out}")
    return 0


def _tx_filter(args):
    return design_fir(_KINDS[args.kind], args.alpha, args.sps, args.span)


def _cmd_modulate(args) -> int:
    filt = _tx_filter(args)
    pn_cfg = LfsrConfig(degree=args.pn_degree, seed=args.pn_seed)
    bits = generate_pn(pn_cfg, 2 * args.n_symbols)
    stream = map_symbols(bits, _FORMATS[args.format])
    stream = SymbolStream(stream.symbols, args.symbol_rate)
    signal = modulate_baseband(stream, _FORMATS[args.format], filt)
    desc = (
        f"{args.format} {args.kind} alpha={args.alpha} sps={args.sps} "
        f"span={args.span} n_symbols={args.n_symbols}"
    )
    write_capture(signal, args.out, description=desc)
    if args.bits_out:
        _write_bits(bits, args.bits_out)
    print(f"symbols: {args.n_symbols}")
    print(f"mean_power: {mean_power(signal):.9g}")
    return 0


def _cmd_analyze(args) -> int:
    signal = read_capture(args.infile)
    fmt = _FORMATS[args.format]
    kind = _KINDS[args.kind]
    tx_filter = design_fir(kind, args.alpha, args.sps, args.span)
    if args.measurement_filter == "auto":
        mf = measurement_filter_for(kind, args.alpha, args.sps)
    elif args.measurement_filter == "rrc":
        mf = design_fir(FilterKind.ROOT_RAISED_COSINE, args.alpha, args.sps, args.span)
    else:
        mf = None
    overhead = tx_filter.n_taps - 1
    n_symbols = (len(signal) - overhead) // args.sps
    if n_symbols < 1:
        raise ValueError("capture too short for the stated transmit filter")
    rx = demodulate(signal, fmt, mf, args.sps, n_symbols, tx_filter.group_delay_samples)

    excl = math.ceil(tx_filter.span_symbols / 2.0)
    if mf is not None:
        excl += math.ceil(mf.span_symbols / 2.0)
    if n_symbols <= 2 * excl:
        raise ValueError("capture too short once filter edges are excluded")
    sl = slice(excl, n_symbols - excl)

    measured = rx.measured_symbols
    if args.no_align:
        measured = measured / rx.applied_gain
    reference = build_reference(rx.decided_symbols[sl])
    summary = error_metrics(measured[sl], reference, pre_align=not args.no_align)

    seg = 4096
    while seg > len(signal):
        seg //= 2
    psd = welch_psd(signal, segment_len=seg, overlap_fraction=0.5, window="hann")
    result = {
        "evm_pct_rms": summary.evm_pct_rms,
        "mag_err_pct_rms": summary.mag_err_pct_rms,
        "phase_err_deg_rms": summary.phase_err_deg_rms,
        "n_symbols": summary.n_symbols,
        "obw_hz": occupied_bandwidth(psd, 0.99),
    }
    if args.reference_bits:
        ref_bits = _read_bits(args.reference_bits)
        rx_bits = rx.decided_bits
        n = min(len(ref_bits), len(rx_bits))
        bsl = slice(2 * excl, n - 2 * excl)
        result["ber"] = bit_error_rate(ref_bits[:n][bsl], rx_bits[:n][bsl])["ber"]
    _json_out(result)
    return 0


def _parse_ebn0(text: str):
    if text.lower() in ("none", "off"):
        return None
    return float(text)


def _cmd_sweep(args) -> int:
    cfg = SweepConfig(
        formats=tuple(_FORMATS[f] for f in args.formats.split(",")),
        filter_kinds=tuple(_KINDS[k] for k in args.kinds.split(",")),
        alphas=tuple(float(a) for a in args.alphas.split(",")),
        symbol_rate_hz=args.symbol_rate,
        n_symbols=args.n_symbols,
        filter_profile=FilterProfile(name=args.profile),
        ebn0_db=_parse_ebn0(args.ebn0_db),
        n_ber_bits=args.ber_bits,
        n_obw_symbols=args.obw_symbols,
        master_seed=args.seed,
    )
    records = run_sweep(cfg, workers=args.workers)
    written = write_sweep_outputs(cfg, records, args.out_dir)
    print(f"wrote {len(records)} records to {args.out_dir}: {', '.join(written)}")
    return 0


def _cmd_psd(args) -> int:
    signal = read_capture(args.infile)
    psd = welch_psd(
        signal,
        segment_len=args.segment,
        overlap_fraction=args.overlap,
        window=args.window,
    )
    write_psd_csv(psd, args.out)
    print(f"wrote {len(psd.freqs_hz)} bins to {args.out}")
    return 0


def _alpha_arg(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"alpha must be in [0, 1], got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="basebandlab",
        description="QPSK/OQPSK baseband lab: pulse shaping, modem, metrics, sweeps",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design-filter", help="write shaping-filter taps as CSV")
    p.add_argument("--kind", choices=("rc", "rrc"), required=True)
    p.add_argument("--alpha", type=_alpha_arg, default=0.35)
    p.add_argument("--sps", type=int, default=16)
    p.add_argument("--span", type=int, default=16)
    p.add_argument("--normalization", choices=tuple(_NORMS), default="peak")
    p.add_argument("--vsg8", action="store_true",
                   help="emit the instrument reference 8-tap set verbatim")
    p.add_argument("--out", default="taps.csv")
    p.set_defaults(func=_cmd_design_filter)

    p = sub.add_parser("modulate", help="synthesize a shaped capture from PN bits")
    p.add_argument("--format", choices=("qpsk", "oqpsk"), required=True)
    p.add_argument("--kind", choices=("rc", "rrc"), required=True)
    p.add_argument("--alpha", type=_alpha_arg, default=0.35)
    p.add_argument("--sps", type=int, default=16)
    p.add_argument("--span", type=int, default=16)
    p.add_argument("--n-symbols", type=int, default=256)
    p.add_argument("--symbol-rate", type=float, default=25_000.0)
    p.add_argument("--pn-degree", type=int, default=6)
    p.add_argument("--pn-seed", type=int, default=0b111111)
    p.add_argument("--bits-out", default=None,
                   help="also write the PN bits for later BER analysis")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_modulate)

    p = sub.add_parser("analyze", help="error-performance summary of a capture")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--format", choices=("qpsk", "oqpsk"), required=True)
    p.add_argument("--kind", choices=("rc", "rrc"), required=True)
    p.add_argument("--alpha", type=_alpha_arg, default=0.35)
    p.add_argument("--sps", type=int, default=16)
    p.add_argument("--span", type=int, default=16)
    p.add_argument("--measurement-filter", choices=("auto", "off", "rrc"),
                   default="auto")
    p.add_argument("--reference-bits", default=None)
    p.add_argument("--no-align", action="store_true",
                   help="report raw errors without complex-gain normalization")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("sweep", help="full factorial sweep -> CSV + plot data")
    p.add_argument("--formats", default="qpsk,oqpsk")
    p.add_argument("--kinds", default="rc,rrc")
    p.add_argument("--alphas", default="0.1,0.22,0.35,0.7,1.0")
    p.add_argument("--profile", choices=("vsg8", "long"), default="vsg8")
    p.add_argument("--symbol-rate", type=float, default=25_000.0)
    p.add_argument("--n-symbols", type=int, default=256)
    p.add_argument("--ebn0-db", default="6.0",
                   help="Eb/N0 in dB for the BER leg, or 'none' for noiseless")
    p.add_argument("--ber-bits", type=int, default=1_000_000)
    p.add_argument("--obw-symbols", type=int, default=9_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=default_workers())
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("psd", help="Welch PSD of a capture as two-column CSV")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--segment", type=int, default=4096)
    p.add_argument("--overlap", type=float, default=0.5)
    p.add_argument("--window", default="hann")
    p.add_argument("--out", default="psd.csv")
    p.set_defaults(func=_cmd_psd)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CaptureError as exc:
        print(f"corrupt capture: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"invalid arguments: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
