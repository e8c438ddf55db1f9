"""Bandlimited signal synthesis, observation noise, and benchmark sweeps.

All randomness is seeded per (base seed, stream, trial index) so trials are
order-independent and results are byte-reproducible. Wall-clock timings are
collected in memory but deliberately kept out of every output file.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import PgirError
from .fileio import fmt_float
from .graphs import Graph, graph_hash
from .reconstruct import ReconstructionConfig, pgir
from .sampling import SamplingSet, density, uniform_sampling_set
from .spectral import (
    SpectralBasis,
    band_vectors,
    bandlimit,
    basis_for_graph,
    max_cutoff_from_basis,
    unrelaxed_radius,
)

# seed streams: (base, stream[, trial])
MASK_STREAM = 0
SIGNAL_STREAM = 1
NOISE_STREAM = 2

ERROR_THRESHOLD = 1e-6  # iterations-to-threshold statistic

SNR_POWER_CONVENTION = "signal power = ||f||^2 / n; noise added to sampled entries only"


def random_bandlimited(basis: SpectralBasis, omega: float, seed) -> np.ndarray:
    """Unit-norm signal with i.i.d. standard-normal coefficients inside the
    band and exact zeros outside; deterministic per seed."""
    band = bandlimit(basis, omega)
    rng = np.random.default_rng(seed)
    coeff = rng.standard_normal(band.width)
    f = band_vectors(band, basis) @ coeff
    nrm = float(np.linalg.norm(f))
    if nrm == 0.0:
        raise PgirError("degenerate zero draw for bandlimited signal")
    return f / nrm


def add_observation_noise(f: np.ndarray, sampling: SamplingSet, snr_db: float, seed) -> np.ndarray:
    """Add i.i.d. Gaussian noise at the requested SNR to sampled entries only.

    Per-sample variance is (||f||^2 / n) * 10^(-snr_db / 10); snr_db = inf
    is the no-noise sentinel. The standard-normal draw does not depend on
    snr_db, so sweeping SNR with a fixed seed rescales one noise pattern.
    """
    f = np.asarray(f, dtype=float)
    power = float(np.dot(f, f)) / f.size
    if power == 0.0:
        raise ValueError("signal has zero norm")
    if math.isinf(snr_db) and snr_db > 0:
        return f.copy()
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(sampling.count)
    sigma = math.sqrt(power * 10.0 ** (-snr_db / 10.0))
    out = f.copy()
    out[sampling.mask] += sigma * z
    return out


@dataclass(frozen=True)
class BenchmarkConfig:
    """One benchmark instance: graph, sampling policy, methods, trial count."""

    graph: Graph
    fraction: float
    omega: float | str = "auto"      # "auto" = largest cutoff passing validity
    methods: tuple[str, ...] = ("ilsr", "opgir")
    trials: int = 100
    base_seed: int = 0
    tolerance: float = 1e-10
    max_iterations: int = 5000
    snr_db: tuple[float, ...] | None = None
    redraw_mask_per_trial: bool = False
    keep_traces: bool = False
    graph_source: str = ""

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.methods:
            raise ValueError("at least one method required")


@dataclass
class BenchmarkResult:
    curves: dict[str, np.ndarray]                 # method -> mean error curve
    iterations_to_threshold: dict[str, dict[str, float]]
    wall_time_per_iteration: dict[str, float]     # seconds; not written to files
    metadata: dict
    per_trial_errors: dict[str, list[np.ndarray]] | None = None


@dataclass
class NoiseSweepResult:
    snr_db: tuple[float, ...]
    steady_state: dict[str, np.ndarray]           # method -> error per SNR
    metadata: dict


def auto_cutoff(basis: SpectralBasis, sampling: SamplingSet) -> float:
    """Largest cutoff passing both validity checks, minus a 1e-9 margin:
    min(sigma_min, first eigenvalue whose inclusion would exceed the
    sampling density)."""
    sigma = max_cutoff_from_basis(basis, sampling)
    s = sampling.count
    width_cap = float(basis.eigenvalues[s]) if s < basis.n else 2.0
    return min(sigma, width_cap) - 1e-9


def _resolve_omega(cfg: BenchmarkConfig, basis: SpectralBasis,
                   samplings: list[SamplingSet]) -> float:
    if isinstance(cfg.omega, str):
        if cfg.omega != "auto":
            raise ValueError(f"omega must be a number or 'auto', got {cfg.omega!r}")
        # must pass validity on every trial's mask
        return min(auto_cutoff(basis, s) for s in samplings)
    return float(cfg.omega)


def _instance(cfg: BenchmarkConfig, cache_dir=None):
    basis = basis_for_graph(cfg.graph, cache_dir)
    if cfg.redraw_mask_per_trial:
        samplings = [
            uniform_sampling_set(cfg.graph.n, cfg.fraction, [cfg.base_seed, MASK_STREAM, t])
            for t in range(cfg.trials)
        ]
    else:
        fixed = uniform_sampling_set(cfg.graph.n, cfg.fraction, [cfg.base_seed, MASK_STREAM])
        samplings = [fixed] * cfg.trials
    omega = _resolve_omega(
        cfg, basis, samplings if cfg.redraw_mask_per_trial else samplings[:1])
    return basis, samplings, omega


def _method_configs(cfg: BenchmarkConfig, omega: float) -> dict[str, ReconstructionConfig]:
    out = {}
    for spec in cfg.methods:
        rc = ReconstructionConfig.from_method_spec(
            spec, omega=omega, tolerance=cfg.tolerance, max_iterations=cfg.max_iterations)
        out[rc.label] = rc
    return out


def _base_metadata(cfg: BenchmarkConfig, basis: SpectralBasis, sampling: SamplingSet,
                   omega: float) -> dict:
    band = bandlimit(basis, omega)
    rho1 = unrelaxed_radius(band, basis, sampling)
    meta = {
        "n": cfg.graph.n,
        "m": cfg.graph.m,
        "graph_hash": graph_hash(cfg.graph),
        "graph_source": cfg.graph_source,
        "fraction": cfg.fraction,
        "sampled_count": sampling.count,
        "density": density(sampling),
        "omega_requested": cfg.omega if isinstance(cfg.omega, str) else float(cfg.omega),
        "omega": omega,
        "sigma_min": max_cutoff_from_basis(basis, sampling),
        "band_width": band.width,
        "width_fraction": band.width_fraction,
        "rho_A1": rho1,
        "trials": cfg.trials,
        "base_seed": cfg.base_seed,
        "tolerance": cfg.tolerance,
        "max_iterations": cfg.max_iterations,
        "mask_policy": "per-trial" if cfg.redraw_mask_per_trial else "fixed",
        "snr_power_convention": SNR_POWER_CONVENTION,
        "methods": {},
    }
    return meta


def _run_trial(observed, sampling, basis, rc, truth):
    start = time.perf_counter()
    report = pgir(observed, sampling, basis, rc, truth=truth)
    elapsed = time.perf_counter() - start
    return report, elapsed


def convergence_benchmark(cfg: BenchmarkConfig, cache_dir=None) -> BenchmarkResult:
    """Run every method on ``cfg.trials`` fresh bandlimited signals and
    average the relative-error traces (padded at each trial's final value)."""
    basis, samplings, omega = _instance(cfg, cache_dir)
    configs = _method_configs(cfg, omega)
    meta = _base_metadata(cfg, basis, samplings[0], omega)

    traces: dict[str, list[np.ndarray]] = {label: [] for label in configs}
    walls: dict[str, list[float]] = {label: [] for label in configs}
    to_threshold: dict[str, list[float]] = {label: [] for label in configs}

    for t in range(cfg.trials):
        sampling = samplings[t]
        truth = random_bandlimited(basis, omega, [cfg.base_seed, SIGNAL_STREAM, t])
        for label, rc in configs.items():
            try:
                report, elapsed = _run_trial(truth, sampling, basis, rc, truth)
            except PgirError as exc:
                raise PgirError(
                    f"trial {t} (seed [{cfg.base_seed}, {SIGNAL_STREAM}, {t}]), "
                    f"method {label}: {exc}") from exc
            errs = report.errors
            traces[label].append(errs)
            walls[label].append(elapsed / max(report.iterations, 1))
            hit = np.flatnonzero(errs <= ERROR_THRESHOLD)
            to_threshold[label].append(float(hit[0] + 1) if hit.size else math.inf)
            if t == 0:
                meta["methods"][label] = {
                    "mu": report.mu_used,
                    "rho_A_mu": report.rho_mu,
                    "predicted_rate": report.predicted_rate,
                }

    curves = {}
    for label, runs in traces.items():
        longest = max(len(r) for r in runs)
        padded = np.vstack([
            np.concatenate([r, np.full(longest - len(r), r[-1])]) for r in runs
        ])
        curves[label] = padded.mean(axis=0)

    stats = {}
    for label, vals in to_threshold.items():
        arr = np.asarray(vals, dtype=float)
        stats[label] = {
            "threshold": ERROR_THRESHOLD,
            "mean": float(arr.mean()),
            "median": float(np.median(arr)),
            "min": float(arr.min()),
            "max": float(arr.max()),
        }
    meta["iterations_to_threshold"] = stats

    return BenchmarkResult(
        curves=curves,
        iterations_to_threshold=stats,
        wall_time_per_iteration={label: float(np.mean(w)) for label, w in walls.items()},
        metadata=meta,
        per_trial_errors=traces if cfg.keep_traces else None,
    )


def noise_sweep(cfg: BenchmarkConfig, cache_dir=None) -> NoiseSweepResult:
    """Mean steady-state (stop-condition) error per method at each SNR.

    Signal seeds are shared with the noiseless benchmark, and the noise
    pattern per trial is independent of the SNR value, so an inf entry
    reproduces the noiseless run exactly.
    """
    if not cfg.snr_db:
        raise ValueError("noise sweep needs a nonempty snr_db list")
    basis, samplings, omega = _instance(cfg, cache_dir)
    configs = _method_configs(cfg, omega)
    meta = _base_metadata(cfg, basis, samplings[0], omega)
    meta["snr_db"] = list(cfg.snr_db)

    steady = {label: np.zeros(len(cfg.snr_db)) for label in configs}
    for j, snr in enumerate(cfg.snr_db):
        sums = {label: 0.0 for label in configs}
        for t in range(cfg.trials):
            sampling = samplings[t]
            truth = random_bandlimited(basis, omega, [cfg.base_seed, SIGNAL_STREAM, t])
            observed = add_observation_noise(
                truth, sampling, snr, [cfg.base_seed, NOISE_STREAM, t])
            for label, rc in configs.items():
                try:
                    report, _ = _run_trial(observed, sampling, basis, rc, truth)
                except PgirError as exc:
                    raise PgirError(
                        f"snr {snr} dB, trial {t}, method {label}: {exc}") from exc
                sums[label] += report.errors[-1]
                if j == 0 and t == 0:
                    meta["methods"][label] = {
                        "mu": report.mu_used,
                        "rho_A_mu": report.rho_mu,
                        "predicted_rate": report.predicted_rate,
                    }
        for label in configs:
            steady[label][j] = sums[label] / cfg.trials

    return NoiseSweepResult(snr_db=tuple(cfg.snr_db), steady_state=steady, metadata=meta)


def curves_csv(result: BenchmarkResult) -> str:
    """Mean-error curves: "iteration,<method>_mean_err,..." with all methods
    padded at their final value to a common length."""
    labels = list(result.curves)
    longest = max(len(c) for c in result.curves.values())
    cols = []
    for label in labels:
        c = result.curves[label]
        cols.append(np.concatenate([c, np.full(longest - len(c), c[-1])]))
    lines = ["iteration," + ",".join(f"{label}_mean_err" for label in labels)]
    for i in range(longest):
        lines.append(f"{i + 1}," + ",".join(fmt_float(col[i]) for col in cols))
    return "\n".join(lines) + "\n"


def trials_csv(result: BenchmarkResult) -> str:
    """Raw per-trial traces in long format, for re-checking the aggregation.
    Requires the benchmark to have run with ``keep_traces``."""
    if result.per_trial_errors is None:
        raise ValueError("benchmark was run without keep_traces")
    lines = ["method,trial,iteration,relative_error"]
    for label, runs in result.per_trial_errors.items():
        for t, errs in enumerate(runs):
            for i, e in enumerate(errs):
                lines.append(f"{label},{t},{i + 1},{fmt_float(e)}")
    return "\n".join(lines) + "\n"


def sweep_csv(result: NoiseSweepResult) -> str:
    labels = list(result.steady_state)
    lines = ["snr_db," + ",".join(f"{label}_steady_state_err" for label in labels)]
    for j, snr in enumerate(result.snr_db):
        row = fmt_float(snr) + "," + ",".join(
            fmt_float(result.steady_state[label][j]) for label in labels)
        lines.append(row)
    return "\n".join(lines) + "\n"
