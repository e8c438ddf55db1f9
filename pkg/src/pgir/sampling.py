"""Sampling sets over vertices, mask files, and the maximum recoverable cutoff."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParseError


@dataclass(frozen=True)
class SamplingSet:
    """Boolean vertex mask; True marks a sampled (observed) vertex."""

    mask: np.ndarray

    def __post_init__(self):
        mask = np.asarray(self.mask, dtype=bool).reshape(-1)
        if mask.size == 0:
            raise ValueError("mask must cover at least one vertex")
        mask.setflags(write=False)
        object.__setattr__(self, "mask", mask)

    @property
    def n(self) -> int:
        return int(self.mask.size)

    @property
    def count(self) -> int:
        return int(self.mask.sum())

    @property
    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.mask)


def density(s: SamplingSet) -> float:
    """Fraction of sampled vertices."""
    return s.count / s.n


def uniform_sampling_set(n: int, fraction: float, seed) -> SamplingSet:
    """Sample round(fraction*n) vertices uniformly without replacement.

    Rounding is half-up; a fraction that rounds to zero samples is an error.
    Deterministic for a fixed seed.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"fraction must lie in (0, 1], got {fraction}")
    count = int(math.floor(fraction * n + 0.5))
    if count < 1:
        raise ValueError(f"fraction {fraction} rounds to zero samples for n={n}")
    count = min(count, n)
    rng = np.random.default_rng(seed)
    chosen = rng.choice(n, size=count, replace=False)
    mask = np.zeros(n, dtype=bool)
    mask[chosen] = True
    return SamplingSet(mask)


def max_cutoff(laplacian: np.ndarray, s: SamplingSet) -> float:
    """Largest cutoff frequency with guaranteed unique recovery.

    Square root of the smallest eigenvalue of the unsampled-vertex principal
    submatrix of the squared Laplacian. With nothing unsampled any bandwidth
    is recoverable, so 2 (the spectrum's upper end) is returned.
    """
    L = np.asarray(laplacian, dtype=float)
    if L.shape != (s.n, s.n):
        raise ValueError("Laplacian order does not match mask length")
    unsampled = ~s.mask
    if not unsampled.any():
        return 2.0
    Lsq = L @ L
    sub = Lsq[np.ix_(unsampled, unsampled)]
    smallest = float(np.linalg.eigvalsh(sub)[0])
    if smallest < -1e-10:
        raise ValueError(f"restricted squared Laplacian has eigenvalue {smallest} < -1e-10")
    return math.sqrt(max(smallest, 0.0))


def parse_mask(text: str, n: int) -> SamplingSet:
    """Parse a mask file: either one sampled index per line, or CSV rows
    "vertex,sampled" with sampled in {0,1}. '#' lines are comments."""
    mask = np.zeros(n, dtype=bool)
    is_csv = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if is_csv is None:
            is_csv = "," in line
        if is_csv:
            if line.lower().replace(" ", "") == "vertex,sampled":
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise ParseError("expected 'vertex,sampled'", line=lineno)
            try:
                idx, flag = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(f"bad mask row {line!r}", line=lineno) from None
            if flag not in (0, 1):
                raise ParseError(f"sampled flag must be 0 or 1, got {flag}", line=lineno)
        else:
            try:
                idx, flag = int(line), 1
            except ValueError:
                raise ParseError(f"bad vertex index {line!r}", line=lineno) from None
        if not 0 <= idx < n:
            raise ParseError(f"vertex {idx} outside [0, {n})", line=lineno)
        if flag:
            mask[idx] = True
    return SamplingSet(mask)


def format_mask(s: SamplingSet) -> str:
    """Mask file text: one sampled vertex index per line."""
    lines = [f"# sampled vertices ({s.count} of {s.n})"]
    lines.extend(str(i) for i in s.indices)
    return "\n".join(lines) + "\n"
