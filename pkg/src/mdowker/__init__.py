"""Bifiltered measure Dowker complexes, their Hilbert functions, and checks."""

from .bifiltration import (
    BuildParams,
    bidegrees,
    build_degree_rips,
    build_measure_dowker,
    minimize_bidegrees,
    slice_complex,
    witness_vector,
)
from .core import (
    NO_RELATION,
    Bidegree,
    BifilteredComplex,
    EmpiricalMeasure,
    GuardError,
    HilbertGrid,
    LambdaMatrix,
    PointCloud,
    SimplicialComplex,
    poset_leq,
)
from .duality import (
    DualityReport,
    check_dowker_duality,
    check_total_weight_duality,
    dowker_complex_at,
    subdivision_filtration,
    total_weight,
    total_weight_complex,
)
from .experiments import run_annulus_experiment, run_er_experiment, sample_annulus_mixture
from .formats import InputError, format_bifiltration, parse_bifiltration
from .homology import betti_numbers, euler_characteristic, hilbert_grid
from .metrics import PreconditionError, check_stability_lemma, hausdorff, prokhorov
from .relations import (
    distance_lambda,
    grid_landmarks,
    knn_rank_lambda,
    make_rng,
    random_uniform_lambda,
    transpose_lambda,
)

__version__ = "0.1.0"
