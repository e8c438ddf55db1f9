"""Signal CSV format, float formatting, and atomic file writes."""

import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import ParseError

SIGNAL_HEADER = "vertex,value"


def fmt_float(x: float) -> str:
    """Format a double with 17 significant digits (lossless round-trip)."""
    return "%.17g" % float(x)


def format_signal_csv(values: np.ndarray) -> str:
    lines = [SIGNAL_HEADER]
    for i, v in enumerate(np.asarray(values, dtype=float)):
        lines.append(f"{i},{fmt_float(v)}")
    return "\n".join(lines) + "\n"


def parse_signal_csv(text: str) -> np.ndarray:
    """Parse a "vertex,value" CSV into a dense vector.

    Vertices must cover 0..n-1 exactly once; order in the file is free.
    """
    entries: dict[int, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.lower().replace(" ", "") == SIGNAL_HEADER:
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ParseError("expected 'vertex,value'", line=lineno)
        try:
            idx = int(parts[0])
            val = float(parts[1])
        except ValueError as exc:
            raise ParseError(f"bad signal entry: {exc}", line=lineno) from None
        if idx < 0:
            raise ParseError("negative vertex index", line=lineno)
        if idx in entries:
            raise ParseError(f"duplicate vertex {idx}", line=lineno)
        entries[idx] = val
    if not entries:
        raise ParseError("empty signal file")
    n = max(entries) + 1
    if len(entries) != n:
        missing = next(i for i in range(n) if i not in entries)
        raise ParseError(f"missing vertex {missing} (signal must be dense)")
    out = np.empty(n, dtype=float)
    for i, v in entries.items():
        out[i] = v
    return out


def write_text_atomic(path: str | Path, text: str) -> None:
    """Write a file via temp-then-rename so readers never see partial output."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def jsonable(obj):
    """Recursively convert to JSON-safe values (arrays to lists, non-finite
    floats to "inf"/"-inf"/"nan" strings)."""
    return _jsonable(obj)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        # JSON has no inf/nan; keep them readable as strings
        if math.isfinite(x):
            return x
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def json_document(obj: dict) -> str:
    """Deterministic JSON rendering: sorted keys, no non-finite literals."""
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"
