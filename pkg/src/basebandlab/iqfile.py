"""IQ capture interchange format.

Binary payload of interleaved I,Q little-endian 32-bit floats plus a JSON
sidecar (same basename with `.json`) carrying the sample rate and length.
Internal math stays at double precision; this file boundary is the only
place single precision appears.
"""

from __future__ import annotations

import json
import os

import numpy as np

from . import __version__
from .core import IqSignal

FORMAT_VERSION = 1


class CaptureError(Exception):
    """Raised when a capture payload and its sidecar disagree."""


def sidecar_path(iq_path: str) -> str:
    base, _ = os.path.splitext(iq_path)
    return base + ".json"


def write_capture(signal: IqSignal, iq_path: str, description: str = "") -> None:
    """Write payload + sidecar; payload length is 8 bytes per sample."""
    interleaved = np.empty(2 * len(signal), dtype="<f4")
    interleaved[0::2] = signal.samples.real.astype("<f4")
    interleaved[1::2] = signal.samples.imag.astype("<f4")
    interleaved.tofile(iq_path)
    sidecar = {
        "sample_rate_hz": signal.sample_rate_hz,
        "n_samples": len(signal),
        "description": description,
        "created_by": f"basebandlab {__version__}",
        "format_version": FORMAT_VERSION,
    }
    with open(sidecar_path(iq_path), "w", encoding="ascii") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_capture(iq_path: str) -> IqSignal:
    """Read and validate a capture; raises CaptureError on any mismatch."""
    try:
        with open(sidecar_path(iq_path), "r", encoding="ascii") as fh:
            sidecar = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CaptureError(f"unreadable sidecar for {iq_path}: {exc}") from exc
    for key in ("sample_rate_hz", "n_samples", "format_version"):
        if key not in sidecar:
            raise CaptureError(f"sidecar missing field {key!r}")
    if sidecar["format_version"] != FORMAT_VERSION:
        raise CaptureError(
            f"unsupported capture format_version {sidecar['format_version']}"
        )
    n_samples = int(sidecar["n_samples"])
    payload_bytes = os.path.getsize(iq_path)
    if payload_bytes != 8 * n_samples:
        raise CaptureError(
            f"corrupt capture: payload is {payload_bytes} bytes, "
            f"sidecar says {8 * n_samples}"
        )
    raw = np.fromfile(iq_path, dtype="<f4")
    samples = raw[0::2].astype(np.float64) + 1j * raw[1::2].astype(np.float64)
    return IqSignal(samples, float(sidecar["sample_rate_hz"]))
