"""CSV and JSON emission with deterministic bytes.

CSV files carry the plot-ready data (17 significant digits, RFC-4180
quoting, LF line endings); a JSON sidecar next to each CSV records the
full parameter echo, grid settings and tool version needed to re-run the
computation bit-identically. Files are written through a temporary path
and renamed, so a failed write never leaves a partial file behind.
"""

from __future__ import annotations

import csv
import json
import os
from pathlib import Path

from .errors import ParameterError

TOOL_VERSION = "cptsqueeze 0.1.0"


def fmt_number(value) -> str:
    """17-significant-digit decimal form of a float (exact round trip)."""
    if isinstance(value, str):
        return value
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return str(value)
    return format(float(value), ".17g")


def _atomic_write(path: Path, writer) -> Path:
    tmp = path.with_name(path.name + ".tmp")
    try:
        with open(tmp, "w", encoding="utf-8", newline="") as fh:
            writer(fh)
        os.replace(tmp, path)
    except OSError as err:
        try:
            tmp.unlink(missing_ok=True)
        finally:
            pass
        raise ParameterError(f"cannot write {path}: {err}") from err
    return path


def write_csv(path, header: list, rows) -> Path:
    """Write rows of numbers (or strings) under a named header."""
    path = Path(path)
    header = list(header)

    def emit(fh):
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(header)
        for row in rows:
            row = list(row)
            if len(row) != len(header):
                raise ParameterError(
                    f"row width {len(row)} does not match header width {len(header)}"
                )
            out.writerow([fmt_number(v) for v in row])

    return _atomic_write(path, emit)


def _jsonable(value):
    """Recursively convert complex numbers and numpy scalars for JSON."""
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, complex):
        return [value.real, value.imag]
    if hasattr(value, "item") and not isinstance(value, (str, bytes)):
        return _jsonable(value.item())
    return value


def write_json(path, payload: dict) -> Path:
    """Write the sidecar record with sorted keys (deterministic bytes)."""
    path = Path(path)

    def emit(fh):
        json.dump(_jsonable(payload), fh, indent=2, sort_keys=True, allow_nan=True)
        fh.write("\n")

    return _atomic_write(path, emit)


def sidecar(command: str, params_echo, outputs: dict, grid: dict | None = None) -> dict:
    return {
        "command": command,
        "params": params_echo,
        "outputs": outputs,
        "grid_settings": grid or {},
        "tool_version": TOOL_VERSION,
    }


def emit_results(path_prefix, header, rows, sidecar_payload, fmt: str = "both"):
    """Emit CSV data and/or the JSON sidecar for one run.

    ``fmt`` selects 'csv', 'json' or 'both'. Returns the written paths.
    """
    prefix = Path(path_prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    written = []
    if fmt in ("csv", "both"):
        written.append(write_csv(prefix.with_suffix(".csv"), header, rows))
    if fmt in ("json", "both"):
        written.append(write_json(prefix.with_suffix(".json"), sidecar_payload))
    if not written:
        raise ParameterError(f"unknown output format {fmt!r}")
    return written
