"""Exact verification toolkit for spectral-gap bounds of the single-site
Gibbs sampler on the 2-D free-boundary Ising model."""

from .bounds import (
    BoundsReport,
    KappaResult,
    Verdict,
    beta1_bound_from_kappa,
    beta_star_chain_holds,
    class_congestion_bound,
    comparison_curves,
    comparison_f,
    comparison_g,
    geometric_beta1_bound,
    geometric_beta_star_bound,
    geometric_gap,
    ingrassia_beta1_bound,
    ingrassia_beta_min_bound,
    ingrassia_gap,
    ingrassia_partition_ceiling,
    kappa_ceiling,
    kappa_exact,
    smallest_n_geometric_beats_ingrassia,
)
from .checks import build_bounds_report, run_verification
from .kernel import (
    DirectedEdge,
    TransitionKernel,
    build_kernel,
    closed_form_flip_probability,
    edge_flow,
    enumerate_directed_edges,
)
from .model import (
    LatticeTooLargeError,
    Site,
    SpinConfiguration,
    conditional_flip_probability,
    energy,
    hamming_distance,
    partition_function,
    site_category,
    stationary_probability,
)
from .paths import (
    CanonicalPath,
    EdgeLoadTable,
    accumulate_edge_loads,
    canonical_path,
    edge_loads_by_walking,
    pairs_through_edge,
)
from .spectral import (
    Spectrum,
    exact_spectrum,
    extremal_eigenvalues,
    power_rows,
    tv_distance,
    verify_tv_decay,
)

__version__ = "0.1.0"
