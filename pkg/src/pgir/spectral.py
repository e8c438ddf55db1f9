"""Eigendecomposition, graph Fourier transform, bandlimiting, and the
spectral radii / convergence rates of the reconstruction iteration.

The iteration operator at relaxation mu is (I - mu*S)P, where S is the
diagonal sampling matrix and P the orthogonal projection onto the span of
the first w Laplacian eigenvectors. Its spectral radius equals that of the
symmetric P(I - mu*S)P, whose nonzero spectrum is carried by the small
w-by-w matrix B = Phi_w^T (I - S) Phi_w; all radius computations here work
on B.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .graphs import Graph, graph_hash, normalized_laplacian
from .sampling import SamplingSet

BOUNDARY_TOL = 1e-12  # keeps eigenvalues exactly at the cutoff inside the band

CACHE_ENV_VAR = "PGIR_CACHE_DIR"


@dataclass(frozen=True)
class SpectralBasis:
    """Full eigensystem of a normalized Laplacian.

    ``eigenvalues`` ascend; column k of ``eigenvectors`` pairs with
    eigenvalue k. Columns are sign-fixed (first nonzero component positive)
    so decompositions are reproducible.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.eigenvalues, dtype=float)
        phi = np.asarray(self.eigenvectors, dtype=float)
        if lam.ndim != 1 or phi.shape != (lam.size, lam.size):
            raise ValueError("eigenvalues (n,) and eigenvectors (n, n) required")
        lam.setflags(write=False)
        phi.setflags(write=False)
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "eigenvectors", phi)

    @property
    def n(self) -> int:
        return int(self.eigenvalues.size)


@dataclass(frozen=True)
class BandlimitSpec:
    """Cutoff frequency plus the retained (prefix) eigenvalue indices."""

    omega: float
    width: int
    n: int

    def __post_init__(self):
        if not 1 <= self.width <= self.n:
            raise ValueError("band width must be in [1, n]")

    @property
    def retained(self) -> np.ndarray:
        return np.arange(self.width)

    @property
    def width_fraction(self) -> float:
        return self.width / self.n


def _fix_signs(phi: np.ndarray) -> np.ndarray:
    """Flip columns so the first component above 1e-12 is positive."""
    out = phi.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size and col[nz[0]] < 0:
            out[:, k] = -col
    return out


def eigendecompose(laplacian: np.ndarray) -> SpectralBasis:
    """Full symmetric eigendecomposition, ascending, deterministic signs."""
    L = np.asarray(laplacian, dtype=float)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise ValueError("square matrix required")
    if not np.array_equal(L, L.T):
        raise ValueError("matrix is not exactly symmetric")
    lam, phi = np.linalg.eigh(L)
    return SpectralBasis(lam, _fix_signs(phi))


def gft(basis: SpectralBasis, f: np.ndarray) -> np.ndarray:
    """Forward transform: coefficients of f in the eigenvector basis."""
    f = np.asarray(f, dtype=float)
    if f.shape != (basis.n,):
        raise ValueError(f"signal length {f.shape} does not match n={basis.n}")
    return basis.eigenvectors.T @ f


def igft(basis: SpectralBasis, fhat: np.ndarray) -> np.ndarray:
    """Inverse transform: synthesize a vertex signal from coefficients."""
    fhat = np.asarray(fhat, dtype=float)
    if fhat.shape != (basis.n,):
        raise ValueError(f"spectrum length {fhat.shape} does not match n={basis.n}")
    return basis.eigenvectors @ fhat


def bandlimit(basis: SpectralBasis, omega: float) -> BandlimitSpec:
    """Band of frequencies <= omega (+1e-12 slack for exact-boundary values)."""
    width = int(np.searchsorted(basis.eigenvalues, omega + BOUNDARY_TOL, side="right"))
    if width == 0:
        raise ValueError(f"no graph frequency at or below omega={omega}")
    return BandlimitSpec(omega=float(omega), width=width, n=basis.n)


def band_vectors(band: BandlimitSpec, basis: SpectralBasis) -> np.ndarray:
    """The n-by-w matrix of retained eigenvector columns."""
    return basis.eigenvectors[:, : band.width]


def apply_lowpass(band: BandlimitSpec, basis: SpectralBasis, f: np.ndarray) -> np.ndarray:
    """Orthogonal projection onto the band, applied as two thin products."""
    f = np.asarray(f, dtype=float)
    if f.shape != (basis.n,):
        raise ValueError(f"signal length {f.shape} does not match n={basis.n}")
    pw = band_vectors(band, basis)
    return pw @ (pw.T @ f)


def lowpass_matrix(band: BandlimitSpec, basis: SpectralBasis) -> np.ndarray:
    """Dense projection matrix; for small-scale diagnostics and tests only.

    The reconstruction path never materializes this (it applies the two thin
    products instead).
    """
    pw = band_vectors(band, basis)
    return pw @ pw.T


def spectral_norm(M: np.ndarray) -> float:
    """Largest singular value."""
    M = np.asarray(M, dtype=float)
    if not np.isfinite(M).all():
        raise ValueError("matrix has non-finite entries")
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def unrelaxed_radius(band: BandlimitSpec, basis: SpectralBasis, sampling: SamplingSet) -> float:
    """Spectral radius of the iteration operator at unit relaxation.

    Computed as the top eigenvalue of B = Phi_w^T (I - S) Phi_w, the band
    restriction of the unsampled-vertex projector; always in [0, 1]. Zero
    means full information (every vertex sampled); one means the sampling
    set cannot distinguish some in-band signal.
    """
    if sampling.mask.shape != (basis.n,):
        raise ValueError("sampling mask length does not match basis")
    unsampled = band_vectors(band, basis)[~sampling.mask, :]
    if unsampled.shape[0] == 0:
        return 0.0
    B = unsampled.T @ unsampled
    top = float(np.linalg.eigvalsh(B)[-1])
    return float(min(max(top, 0.0), 1.0))


def relaxed_radius(rho1: float, mu: float) -> float:
    """Closed-form spectral radius of the iteration operator at relaxation mu.

    The band eigenvalues lam of B map to 1 - mu*(1 - lam); the extremes
    lam in {0, rho1} give max(|1 - mu|, |1 - mu*(1 - rho1)|). The lam = 0
    branch is attained whenever the band is wider than the unsampled vertex
    set; at mu = 1 and at the optimal mu the formula is exact for every
    instance.
    """
    if not 0.0 <= rho1 <= 1.0:
        raise ValueError(f"rho1 must lie in [0, 1], got {rho1}")
    if not 0.0 < mu < 2.0:
        raise ValueError(f"mu must lie in (0, 2), got {mu}")
    return max(abs(1.0 - mu), abs(1.0 - mu * (1.0 - rho1)))


def asymptotic_rate(rho: float) -> float:
    """Asymptotic convergence rate -ln(rho); larger is faster."""
    if not 0.0 < rho < 1.0:
        raise ValueError(f"rate defined only for spectral radius in (0, 1), got {rho}")
    return -math.log(rho)


def average_rate(M: np.ndarray, k: int) -> float:
    """Average convergence rate over k iterations: -ln ||M^k|| / k."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    M = np.asarray(M, dtype=float)
    nrm = spectral_norm(np.linalg.matrix_power(M, k))
    if nrm >= 1.0:
        raise ValueError(f"||M^{k}|| = {nrm} >= 1: not contracting over {k} iterations")
    return -math.log(nrm) / k


def max_cutoff_from_basis(basis: SpectralBasis, sampling: SamplingSet) -> float:
    """Largest recoverable cutoff, computed from the eigensystem.

    Equals sampling.max_cutoff on the assembled Laplacian: the unsampled
    restriction of the squared operator is (U*lam)(U*lam)^T for U the
    unsampled eigenvector rows, so no n-by-n matrix is rebuilt.
    """
    if sampling.mask.shape != (basis.n,):
        raise ValueError("sampling mask length does not match basis")
    if sampling.count == basis.n:
        return 2.0
    U = basis.eigenvectors[~sampling.mask, :] * basis.eigenvalues
    sub = U @ U.T
    smallest = float(np.linalg.eigvalsh(sub)[0])
    if smallest < -1e-10:
        raise ValueError(f"restricted squared Laplacian has eigenvalue {smallest} < -1e-10")
    return math.sqrt(max(smallest, 0.0))


# --- basis cache -----------------------------------------------------------
#
# A SpectralBasis keyed by the graph content hash, stored as one .npz per
# graph. float64 arrays round-trip bit-exact, which amortizes the O(n^3)
# eigendecomposition across CLI invocations.


def cache_dir_from_env() -> Path | None:
    val = os.environ.get(CACHE_ENV_VAR)
    return Path(val) if val else None


def _cache_path(cache_dir: str | Path, key: str) -> Path:
    return Path(cache_dir) / f"{key}.npz"


def store_basis_cache(g: Graph, basis: SpectralBasis, cache_dir: str | Path) -> Path:
    path = _cache_path(cache_dir, graph_hash(g))
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp.npz")
    with open(tmp, "wb") as fh:
        np.savez(fh, n=np.int64(g.n), eigenvalues=basis.eigenvalues,
                 eigenvectors=basis.eigenvectors)
    os.replace(tmp, path)
    return path


def load_basis_cache(g: Graph, cache_dir: str | Path) -> SpectralBasis | None:
    path = _cache_path(cache_dir, graph_hash(g))
    if not path.exists():
        return None
    with np.load(path) as data:
        if int(data["n"]) != g.n:
            return None
        return SpectralBasis(data["eigenvalues"].copy(), data["eigenvectors"].copy())


def basis_for_graph(g: Graph, cache_dir: str | Path | None = None) -> SpectralBasis:
    """Eigendecompose the graph's normalized Laplacian, via the cache if set."""
    if cache_dir is not None:
        cached = load_basis_cache(g, cache_dir)
        if cached is not None:
            return cached
    basis = eigendecompose(normalized_laplacian(g))
    if cache_dir is not None:
        store_basis_cache(g, basis, cache_dir)
    return basis
