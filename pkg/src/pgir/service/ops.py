"""Service operations: one function per endpoint, shared by the HTTP app
and the in-process CLI transport. All functions take a request model and
return a response model; domain errors propagate as package exceptions."""

from __future__ import annotations

import math

from .. import __version__
from ..errors import PgirError
from ..experiments import (
    BenchmarkConfig,
    convergence_benchmark,
    curves_csv,
    noise_sweep,
    random_bandlimited,
    sweep_csv,
    trials_csv,
)
from ..fileio import format_signal_csv, jsonable, parse_signal_csv
from ..graphs import Graph, dump_edge_list, erdos_renyi, graph_hash, load_edge_list, normalized_laplacian
from ..reconstruct import (
    ReconstructionConfig,
    optimal_relaxation,
    pgir,
    report_document,
    trace_csv,
)
from ..sampling import density, format_mask, max_cutoff, parse_mask, uniform_sampling_set
from ..spectral import bandlimit, basis_for_graph, cache_dir_from_env, relaxed_radius, unrelaxed_radius
from . import schemas

GRAPH_STREAM = 3  # seed stream for graphs generated inside a benchmark


def health() -> schemas.HealthResponse:
    return schemas.HealthResponse(status="ok", version=__version__)


def gen_graph(req: schemas.GenGraphRequest) -> schemas.GenGraphResponse:
    g = erdos_renyi(req.n, req.m, req.seed)
    return schemas.GenGraphResponse(
        edge_list=dump_edge_list(g), n=g.n, m=g.m, graph_hash=graph_hash(g))


def _finite_or_none(x: float) -> float | None:
    return x if math.isfinite(x) else None


def analyze(req: schemas.AnalyzeRequest) -> schemas.AnalyzeResponse:
    g = load_edge_list(req.edge_list)
    sampling = parse_mask(req.mask, g.n)
    sigma_min = max_cutoff(normalized_laplacian(g), sampling)
    resp = schemas.AnalyzeResponse(
        n=g.n,
        m=g.m,
        graph_hash=graph_hash(g),
        sampled_count=sampling.count,
        density=density(sampling),
        sigma_min=sigma_min,
    )
    if req.omega is None:
        return resp

    basis = basis_for_graph(g, cache_dir_from_env())
    band = bandlimit(basis, req.omega)
    rho1 = unrelaxed_radius(band, basis, sampling)
    resp.omega = req.omega
    resp.band_width = band.width
    resp.width_fraction = band.width_fraction
    resp.rho_A1 = rho1
    if req.omega > sigma_min + 1e-9:
        resp.notes.append("omega exceeds sigma_min: unique recovery is not guaranteed")
    if band.width > sampling.count:
        resp.notes.append("band width exceeds sampled count: reconstruction would be rejected")
    if 0.0 < rho1 < 1.0:
        resp.predicted_rate_ilsr = _finite_or_none(-math.log(rho1))
    elif rho1 == 0.0:
        resp.notes.append("rho(A_1) = 0: the first iterate is already exact")
    else:
        resp.notes.append("rho(A_1) = 1: the unit-relaxation iteration does not converge")
    try:
        mu = optimal_relaxation(rho1)
    except ValueError:
        resp.notes.append("mu_opt undefined: rho(A_1) within 1e-9 of 1")
        return resp
    resp.mu_opt = mu
    rho_mu = relaxed_radius(rho1, mu)
    resp.rho_A_mu_opt = rho_mu
    if rho_mu > 0.0:
        resp.predicted_rate_opgir = _finite_or_none(-math.log(rho_mu))
    return resp


def gen_signal(req: schemas.GenSignalRequest) -> schemas.GenSignalResponse:
    g = load_edge_list(req.edge_list)
    basis = basis_for_graph(g, cache_dir_from_env())
    f = random_bandlimited(basis, req.omega, req.seed)
    band = bandlimit(basis, req.omega)
    return schemas.GenSignalResponse(signal_csv=format_signal_csv(f), band_width=band.width)


def sample(req: schemas.SampleRequest) -> schemas.SampleResponse:
    g = load_edge_list(req.edge_list)
    sampling = uniform_sampling_set(g.n, req.fraction, req.seed)
    return schemas.SampleResponse(
        mask=format_mask(sampling), sampled_count=sampling.count, density=density(sampling))


def reconstruct(req: schemas.ReconstructRequest) -> schemas.ReconstructResponse:
    g = load_edge_list(req.edge_list)
    sampling = parse_mask(req.mask, g.n)
    observed = parse_signal_csv(req.signal_csv)
    if observed.size != g.n:
        raise PgirError(f"signal length {observed.size} does not match graph n={g.n}")
    truth = None
    if req.truth_csv is not None:
        truth = parse_signal_csv(req.truth_csv)
        if truth.size != g.n:
            raise PgirError(f"truth length {truth.size} does not match graph n={g.n}")
    config = ReconstructionConfig.from_method_spec(
        req.method, omega=req.omega, tolerance=req.tolerance,
        max_iterations=req.max_iterations)
    basis = basis_for_graph(g, cache_dir_from_env())
    report = pgir(observed, sampling, basis, config, truth=truth)
    return schemas.ReconstructResponse(
        signal_csv=format_signal_csv(report.signal),
        trace_csv=trace_csv(report),
        report=jsonable(report_document(report)),
    )


def _benchmark_graph(req: schemas.BenchmarkRequest) -> tuple[Graph, str]:
    if (req.edge_list is None) == (req.er is None):
        raise PgirError("benchmark needs exactly one of edge_list or er")
    if req.er is not None:
        g = erdos_renyi(req.er.n, req.er.m, [req.seed, GRAPH_STREAM])
        return g, f"er(n={req.er.n}, m={req.er.m}, seed=[{req.seed}, {GRAPH_STREAM}])"
    g = load_edge_list(req.edge_list)
    return g, f"edge-list sha256:{graph_hash(g)[:16]}"


def benchmark(req: schemas.BenchmarkRequest) -> schemas.BenchmarkResponse:
    g, source = _benchmark_graph(req)
    cfg = BenchmarkConfig(
        graph=g,
        fraction=req.fraction,
        omega=req.omega,
        methods=tuple(req.methods),
        trials=req.trials,
        base_seed=req.seed,
        tolerance=req.tolerance,
        max_iterations=req.max_iterations,
        snr_db=tuple(req.snr_db) if req.snr_db else None,
        redraw_mask_per_trial=req.redraw_mask_per_trial,
        keep_traces=req.keep_traces,
        graph_source=source,
    )
    cache_dir = cache_dir_from_env()
    result = convergence_benchmark(cfg, cache_dir)
    metadata = dict(result.metadata)
    trials_text = trials_csv(result) if req.keep_traces else None
    snr_text = None
    if cfg.snr_db:
        sweep = noise_sweep(cfg, cache_dir)
        snr_text = sweep_csv(sweep)
        metadata["snr_db"] = list(cfg.snr_db)
    return schemas.BenchmarkResponse(
        curves_csv=curves_csv(result), snr_csv=snr_text, trials_csv=trials_text,
        metadata=jsonable(metadata))
