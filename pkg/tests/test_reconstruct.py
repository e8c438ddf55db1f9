import numpy as np
import pytest

from pgir import (
    ReconstructionConfig,
    SamplingSet,
    ValidityError,
    basis_for_graph,
    least_squares_fit,
    lowpass_matrix,
    optimal_relaxation,
    pgir,
    random_bandlimited,
    relative_error,
)
from pgir.reconstruct import report_document, trace_csv


def _mask(n, sampled):
    mask = np.zeros(n, dtype=bool)
    mask[list(sampled)] = True
    return SamplingSet(mask)


def _k2_setup(k2):
    basis = basis_for_graph(k2)
    return basis, _mask(2, [0])


# --- optimal relaxation ------------------------------------------------------

def test_optimal_relaxation_values():
    assert optimal_relaxation(0.0) == 1.0
    assert optimal_relaxation(0.5) == pytest.approx(4.0 / 3.0, abs=1e-15)
    assert 1.0 <= optimal_relaxation(0.9) < 2.0


def test_optimal_relaxation_rejects_unit_rho():
    with pytest.raises(ValueError):
        optimal_relaxation(1.0)
    with pytest.raises(ValueError):
        optimal_relaxation(1.0 - 1e-12)
    with pytest.raises(ValueError):
        optimal_relaxation(-0.1)


# --- hand-computed two-vertex recursion --------------------------------------

def test_pgir_k2_ilsr_iterates(k2):
    basis, sampling = _k2_setup(k2)
    c = 2.0
    observed = np.array([c, 0.0])
    for iters, expected in [(1, [c, c / 2]), (2, [c, 3 * c / 4])]:
        cfg = ReconstructionConfig(omega=1.0, method="ilsr", tolerance=1e-300,
                                   max_iterations=iters)
        rep = pgir(observed, sampling, basis, cfg, truth=np.array([c, c]))
        assert np.allclose(rep.signal, expected, atol=1e-12)
    cfg = ReconstructionConfig(omega=1.0, method="ilsr", tolerance=1e-300,
                               max_iterations=30)
    rep = pgir(observed, sampling, basis, cfg, truth=np.array([c, c]))
    ratios = rep.errors[1:] / rep.errors[:-1]
    assert np.allclose(ratios, 0.5, atol=1e-9)
    assert rep.rho1 == pytest.approx(0.5, abs=1e-12)


def test_pgir_k2_opgir_contracts_three_times_faster(k2):
    basis, sampling = _k2_setup(k2)
    c = 2.0
    cfg = ReconstructionConfig(omega=1.0, method="opgir", tolerance=1e-300,
                               max_iterations=15)
    rep = pgir(np.array([c, 0.0]), sampling, basis, cfg, truth=np.array([c, c]))
    assert rep.mu_used == pytest.approx(4.0 / 3.0, abs=1e-12)
    assert rep.rho_mu == pytest.approx(1.0 / 3.0, abs=1e-12)
    ratios = rep.errors[1:] / rep.errors[:-1]
    assert np.allclose(ratios, 1.0 / 3.0, atol=1e-9)


def test_pgir_full_sampling_recovers_immediately(c6):
    basis = basis_for_graph(c6)
    f = random_bandlimited(basis, 1.0, seed=4)
    cfg = ReconstructionConfig(omega=1.0, method="ilsr")
    rep = pgir(f, _mask(6, range(6)), basis, cfg, truth=f)
    assert rep.iterations == 1
    assert rep.converged
    assert np.allclose(rep.signal, f, atol=1e-12)


def test_pgir_ignores_unsampled_observations(k2):
    basis, sampling = _k2_setup(k2)
    cfg = ReconstructionConfig(omega=1.0, method="ilsr", tolerance=1e-300,
                               max_iterations=3)
    a = pgir(np.array([2.0, 0.0]), sampling, basis, cfg)
    b = pgir(np.array([2.0, 99.0]), sampling, basis, cfg)
    assert np.array_equal(a.signal, b.signal)


# --- fixed point and oracle equivalence --------------------------------------

def test_bandlimited_truth_is_fixed_point(draw_valid_instance):
    for seed in range(5):
        inst = draw_valid_instance(seed, rho1_range=(0.0, 0.99))
        f = random_bandlimited(inst.basis, inst.omega, seed=seed)
        rho1 = inst.rho1
        mu = optimal_relaxation(rho1) if rho1 < 0.999 else 1.0
        P = lowpass_matrix(inst.band, inst.basis)
        s = inst.sampling.mask.astype(float)
        mapped = mu * s * f + (1.0 - mu * s) * (P @ f)
        assert np.max(np.abs(mapped - f)) < 1e-12


def test_pgir_matches_least_squares(draw_valid_instance):
    for seed in range(6):
        inst = draw_valid_instance(seed, rho1_range=(0.0, 0.99))
        truth = random_bandlimited(inst.basis, inst.omega, seed=1000 + seed)
        direct = least_squares_fit(truth, inst.sampling, inst.basis, inst.omega)
        for method in ("ilsr", "opgir"):
            cfg = ReconstructionConfig(omega=inst.omega, method=method,
                                       tolerance=1e-12, max_iterations=20000)
            rep = pgir(truth, inst.sampling, inst.basis, cfg, truth=truth)
            assert relative_error(rep.signal, direct) < 1e-6
            assert relative_error(rep.signal, truth) < 1e-6


def test_error_trace_monotone(draw_valid_instance):
    for seed in (2, 5):
        inst = draw_valid_instance(seed, rho1_range=(0.1, 0.95))
        truth = random_bandlimited(inst.basis, inst.omega, seed=50 + seed)
        cfg = ReconstructionConfig(omega=inst.omega, method="ilsr",
                                   tolerance=1e-11, max_iterations=5000)
        rep = pgir(truth, inst.sampling, inst.basis, cfg, truth=truth)
        diffs = np.diff(rep.errors)
        assert (diffs <= 1e-12).all()


def test_opgir_never_slower_than_ilsr(draw_valid_instance):
    threshold = 1e-6
    for seed in range(6):
        inst = draw_valid_instance(seed, rho1_range=(0.15, 0.95))
        truth = random_bandlimited(inst.basis, inst.omega, seed=300 + seed)
        iters = {}
        for method in ("ilsr", "opgir"):
            cfg = ReconstructionConfig(omega=inst.omega, method=method,
                                       tolerance=1e-12, max_iterations=20000)
            rep = pgir(truth, inst.sampling, inst.basis, cfg, truth=truth)
            hit = np.flatnonzero(rep.errors <= threshold)
            assert hit.size
            iters[method] = hit[0] + 1
        assert iters["opgir"] <= iters["ilsr"]
        if inst.rho1 > 0.05:
            assert iters["opgir"] < iters["ilsr"]


def test_empirical_ratio_matches_predicted_radius(draw_valid_instance):
    for seed in (1, 4):
        inst = draw_valid_instance(seed, rho1_range=(0.3, 0.9))
        truth = random_bandlimited(inst.basis, inst.omega, seed=70 + seed)
        for method in ("ilsr", "opgir"):
            rho = inst.rho1 if method == "ilsr" else optimal_relaxation(inst.rho1) - 1.0
            # stop while the error is still well above the double-precision
            # floor, else tail ratios saturate toward 1
            iters = max(30, int(np.log(1e-9) / np.log(rho)))
            cfg = ReconstructionConfig(omega=inst.omega, method=method,
                                       tolerance=1e-300, max_iterations=iters)
            rep = pgir(truth, inst.sampling, inst.basis, cfg, truth=truth)
            ratio = (rep.errors[-1] / rep.errors[-21]) ** (1.0 / 20.0)
            assert ratio == pytest.approx(rep.rho_mu, rel=0.10)


def test_mu_grid_minimum_matches_optimal_relaxation():
    grid = np.arange(0.01, 2.0, 0.01)
    for rho1 in (0.1, 0.3, 0.5, 0.7, 0.9):
        radii = [max(abs(1 - mu), abs(1 - mu * (1 - rho1))) for mu in grid]
        best = grid[int(np.argmin(radii))]
        assert abs(best - optimal_relaxation(rho1)) <= 0.01 + 1e-12


# --- validity checks ---------------------------------------------------------

def test_validity_omega_exceeds_sigma_min(k2):
    basis, sampling = _k2_setup(k2)
    cfg = ReconstructionConfig(omega=1.9, method="ilsr")
    with pytest.raises(ValidityError, match="omega exceeds sigma_min"):
        pgir(np.array([1.0, 0.0]), sampling, basis, cfg)


def test_validity_width_exceeds_density(c6):
    basis = basis_for_graph(c6)
    cfg = ReconstructionConfig(omega=1.0, method="ilsr")  # width 3 > 1 sample
    with pytest.raises(ValidityError, match="width fraction exceeds"):
        pgir(np.zeros(6), _mask(6, [0]), basis, cfg)


def test_validity_underdetermined_opgir_rejected(c6):
    # sampling too thin for the requested band: one of the validity
    # conditions fires before any iteration runs
    basis = basis_for_graph(c6)
    cfg = ReconstructionConfig(omega=0.5, method="opgir")
    with pytest.raises(ValidityError):
        pgir(np.zeros(6), _mask(6, [0, 1, 2]), basis, cfg)


def test_resolve_mu_rejects_borderline_rho1():
    # unreachable through valid instances (omega <= sigma_min implies
    # rho1 < 1), but guards the numerical borderline
    from pgir.reconstruct import _resolve_mu

    cfg = ReconstructionConfig(omega=0.5, method="opgir")
    with pytest.raises(ValidityError, match="uniquely determine"):
        _resolve_mu(cfg, 1.0 - 1e-12)
    assert _resolve_mu(cfg, 0.5) == pytest.approx(4.0 / 3.0)
    assert _resolve_mu(ReconstructionConfig(omega=0.5, method="ilsr"), 0.9) == 1.0


def test_config_rejects_bad_mu():
    with pytest.raises(ValueError, match=r"\(0, 2\)"):
        ReconstructionConfig(omega=1.0, method="fixed", mu=2.0)
    with pytest.raises(ValueError, match=r"\(0, 2\)"):
        ReconstructionConfig(omega=1.0, method="fixed", mu=0.0)


def test_config_method_spec_parsing():
    cfg = ReconstructionConfig.from_method_spec("mu=1.5", omega=0.5)
    assert cfg.method == "fixed"
    assert cfg.mu == 1.5
    assert cfg.label == "mu=1.5"
    assert ReconstructionConfig.from_method_spec("ilsr", omega=0.5).label == "ilsr"
    with pytest.raises(ValueError):
        ReconstructionConfig.from_method_spec("newton", omega=0.5)
    with pytest.raises(ValueError):
        ReconstructionConfig.from_method_spec("mu=abc", omega=0.5)


def test_config_invariants():
    with pytest.raises(ValueError):
        ReconstructionConfig(omega=1.0, tolerance=0.0)
    with pytest.raises(ValueError):
        ReconstructionConfig(omega=1.0, max_iterations=0)


# --- direct least-squares solver ---------------------------------------------

def test_least_squares_k2(k2):
    basis, sampling = _k2_setup(k2)
    c = 3.0
    out = least_squares_fit(np.array([c, 0.0]), sampling, basis, omega=1.0)
    assert np.allclose(out, [c, c], atol=1e-12)


def test_least_squares_full_sampling_exact(c6):
    basis = basis_for_graph(c6)
    truth = random_bandlimited(basis, 1.0, seed=8)
    out = least_squares_fit(truth, _mask(6, range(6)), basis, omega=1.0)
    assert np.allclose(out, truth, atol=1e-12)


def test_least_squares_rank_deficient(c6):
    basis = basis_for_graph(c6)
    with pytest.raises(ValidityError, match="rank"):
        least_squares_fit(np.zeros(6), _mask(6, []), basis, omega=1.0)


# --- metric ------------------------------------------------------------------

def test_relative_error_values():
    t = np.array([1.0, 2.0, 2.0])
    assert relative_error(t, t) == 0.0
    assert relative_error(np.zeros(3), t) == pytest.approx(1.0)
    assert relative_error(2 * t, t) == pytest.approx(1.0)


def test_relative_error_zero_truth():
    with pytest.raises(ValueError):
        relative_error(np.ones(3), np.zeros(3))


# --- report artifacts --------------------------------------------------------

def test_trace_csv_shape(k2):
    basis, sampling = _k2_setup(k2)
    cfg = ReconstructionConfig(omega=1.0, method="ilsr", tolerance=1e-300,
                               max_iterations=4)
    rep = pgir(np.array([1.0, 0.0]), sampling, basis, cfg, truth=np.array([1.0, 1.0]))
    lines = trace_csv(rep).strip().splitlines()
    assert lines[0] == "iteration,relative_update,relative_error"
    assert len(lines) == 1 + rep.iterations
    assert lines[1].startswith("1,")

    rep_no_truth = pgir(np.array([1.0, 0.0]), sampling, basis, cfg)
    header = trace_csv(rep_no_truth).splitlines()[0]
    assert header == "iteration,relative_update"


def test_report_document_fields(k2):
    basis, sampling = _k2_setup(k2)
    cfg = ReconstructionConfig(omega=1.0, method="opgir")
    rep = pgir(np.array([1.0, 0.0]), sampling, basis, cfg)
    doc = report_document(rep)
    for key in ("mu_used", "rho_A1", "rho_A_mu", "predicted_rate",
                "iterations", "converged", "omega", "sigma_min", "density"):
        assert key in doc
    assert doc["rho_A1"] == pytest.approx(0.5, abs=1e-12)
    assert doc["mu_used"] == pytest.approx(4.0 / 3.0, abs=1e-12)
    assert doc["converged"] is True
    assert rep.converged and rep.updates[-1] <= cfg.tolerance
