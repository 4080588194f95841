"""Training-free coreset selection.

Selection weighs a facility-location objective by per-sample density
scores derived from k-nearest-neighbor radii, with the neighborhood size
k resolved in closed form from a coverage target. Baselines: plain
facility location, k-center greedy (farthest-first), and uniform random.
"""

from .coverage import (
    CoverageEstimate,
    CoveragePlan,
    empirical_coverage,
    expected_coverage,
    find_k_for_coverage,
    mc_expected_coverage,
)
from .density import (
    DensityStats,
    RadiusVector,
    ball_count,
    density_scores,
    knn_radii,
    log_density,
)
from .estimator import CoresetSelector
from .io_formats import (
    read_embeddings,
    read_labels,
    read_result,
    write_embeddings,
    write_labels,
    write_result,
)
from .selectors import (
    run_selection,
    select_facility_location,
    select_kcenter_greedy,
    select_random,
    select_subzerocore,
)
from .similarity import DEFAULT_ROW_CAP, pairwise_distances, pairwise_similarities
from .submodular import (
    GreedyTrace,
    WeightedFLInstance,
    brute_force_max,
    greedy_lazy,
    greedy_naive,
    marginal_gain,
    objective,
)
from .synthetic import gaussian_mixture
from .types import (
    KERNELS,
    METHODS,
    ClassSelection,
    ClassView,
    CoresetResult,
    EmbeddingSet,
    InputError,
    SelectionConfig,
    compute_class_budgets,
    validate_embeddings,
)

__version__ = "0.1.0"

__all__ = [
    "CoresetSelector",
    "CoresetResult",
    "ClassSelection",
    "ClassView",
    "CoverageEstimate",
    "CoveragePlan",
    "DensityStats",
    "DEFAULT_ROW_CAP",
    "EmbeddingSet",
    "GreedyTrace",
    "InputError",
    "KERNELS",
    "METHODS",
    "RadiusVector",
    "SelectionConfig",
    "WeightedFLInstance",
    "ball_count",
    "brute_force_max",
    "compute_class_budgets",
    "density_scores",
    "empirical_coverage",
    "expected_coverage",
    "find_k_for_coverage",
    "gaussian_mixture",
    "greedy_lazy",
    "greedy_naive",
    "knn_radii",
    "log_density",
    "marginal_gain",
    "mc_expected_coverage",
    "objective",
    "pairwise_distances",
    "pairwise_similarities",
    "read_embeddings",
    "read_labels",
    "read_result",
    "run_selection",
    "select_facility_location",
    "select_kcenter_greedy",
    "select_random",
    "select_subzerocore",
    "validate_embeddings",
    "write_embeddings",
    "write_labels",
    "write_result",
]
