"""Bandlimited graph-signal reconstruction from partial vertex samples.

Core pipeline: build a graph, eigendecompose its normalized Laplacian,
choose a sampling set and a cutoff frequency, then recover the signal with
the relaxed projection/resampling iteration (``ilsr`` at unit relaxation,
``opgir`` at the radius-minimizing relaxation) or the direct least-squares
solver. ``experiments`` adds seeded multi-trial convergence and noise
benchmarks; ``service``/``cli`` expose everything over HTTP and the shell.
"""

from .errors import GenerationError, ParseError, PgirError, ValidityError
from .graphs import (
    Graph,
    degrees,
    dump_edge_list,
    erdos_renyi,
    from_edge_pairs,
    graph_hash,
    load_edge_list,
    normalized_laplacian,
)
from .sampling import SamplingSet, density, format_mask, max_cutoff, parse_mask, uniform_sampling_set
from .spectral import (
    BandlimitSpec,
    SpectralBasis,
    apply_lowpass,
    asymptotic_rate,
    average_rate,
    bandlimit,
    basis_for_graph,
    eigendecompose,
    gft,
    igft,
    lowpass_matrix,
    max_cutoff_from_basis,
    relaxed_radius,
    spectral_norm,
    unrelaxed_radius,
)
from .reconstruct import (
    ReconstructionConfig,
    ReconstructionReport,
    least_squares_fit,
    optimal_relaxation,
    pgir,
    relative_error,
)
from .experiments import (
    BenchmarkConfig,
    BenchmarkResult,
    NoiseSweepResult,
    add_observation_noise,
    auto_cutoff,
    convergence_benchmark,
    noise_sweep,
    random_bandlimited,
)

__version__ = "0.1.0"

__all__ = [
    "BandlimitSpec",
    "BenchmarkConfig",
    "BenchmarkResult",
    "GenerationError",
    "Graph",
    "NoiseSweepResult",
    "ParseError",
    "PgirError",
    "ReconstructionConfig",
    "ReconstructionReport",
    "SamplingSet",
    "SpectralBasis",
    "ValidityError",
    "add_observation_noise",
    "apply_lowpass",
    "asymptotic_rate",
    "auto_cutoff",
    "average_rate",
    "bandlimit",
    "basis_for_graph",
    "convergence_benchmark",
    "degrees",
    "density",
    "dump_edge_list",
    "eigendecompose",
    "erdos_renyi",
    "format_mask",
    "from_edge_pairs",
    "gft",
    "graph_hash",
    "igft",
    "least_squares_fit",
    "load_edge_list",
    "lowpass_matrix",
    "max_cutoff",
    "max_cutoff_from_basis",
    "noise_sweep",
    "normalized_laplacian",
    "optimal_relaxation",
    "parse_mask",
    "pgir",
    "random_bandlimited",
    "relative_error",
    "relaxed_radius",
    "spectral_norm",
    "uniform_sampling_set",
    "unrelaxed_radius",
    "__version__",
]
