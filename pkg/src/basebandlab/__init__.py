"""basebandlab: a software QPSK/OQPSK baseband transmission laboratory.

Raised-cosine and root-raised-cosine pulse shaping, a known-timing modem,
analyzer-style error metrics (EVM, magnitude error, phase error, BER),
occupied-bandwidth estimation, and a reproducible roll-off sweep harness.
"""

__version__ = "0.1.0"

from .channel import ChannelConfig, awgn, impair
from .core import (
    FilterKind,
    IqSignal,
    ModFormat,
    Normalization,
    SymbolStream,
    mean_power,
    scale_to_unit_power,
)
from .harness import (
    FilterProfile,
    MetricsRecord,
    SweepConfig,
    best_choice_summary,
    run_point,
    run_sweep,
)
from .metrics import (
    ErrorSummary,
    align,
    bit_error_rate,
    build_reference,
    error_metrics,
)
from .modem import RxResult, TxFrame, demodulate, map_symbols, modulate_baseband
from .pn import LfsrConfig, generate_pn
from .pulseshape import (
    FirFilter,
    FrequencyResponse,
    IsiReport,
    cascade_response,
    check_nyquist_isi,
    design_fir,
    eight_tap_truncated_fir,
    fir_apply,
    rc_freq_response,
    rc_impulse,
    rrc_impulse,
    vsg_reference_taps,
)
from .spectrum import (
    PsdEstimate,
    bandwidth_efficiency,
    occupied_bandwidth,
    welch_psd,
)

__all__ = [
    "ChannelConfig",
    "ErrorSummary",
    "FilterKind",
    "FilterProfile",
    "FirFilter",
    "FrequencyResponse",
    "IqSignal",
    "IsiReport",
    "LfsrConfig",
    "MetricsRecord",
    "ModFormat",
    "Normalization",
    "PsdEstimate",
    "RxResult",
    "SweepConfig",
    "SymbolStream",
    "TxFrame",
    "align",
    "awgn",
    "bandwidth_efficiency",
    "best_choice_summary",
    "bit_error_rate",
    "build_reference",
    "cascade_response",
    "check_nyquist_isi",
    "demodulate",
    "design_fir",
    "eight_tap_truncated_fir",
    "error_metrics",
    "fir_apply",
    "generate_pn",
    "impair",
    "map_symbols",
    "mean_power",
    "modulate_baseband",
    "occupied_bandwidth",
    "rc_freq_response",
    "rc_impulse",
    "rrc_impulse",
    "run_point",
    "run_sweep",
    "scale_to_unit_power",
    "vsg_reference_taps",
    "welch_psd",
]
