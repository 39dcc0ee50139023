"""Mixing-time machinery for biased random-to-top card shuffles.

Five layers: deck and shuffle primitives (deck_core), exact small-deck
distribution audits (exact_analysis), coupon-collector style bounds for
move-to-front chains (coupon_bounds), certified complex-spectral lower
bounds for position-weighted chains (spectral), and coupling / tracked-
statistic simulations (coupling_sim).  The `shufflemix` console script
exposes canned experiment presets over the same code paths.
"""

from .errors import (
    CapacityError,
    CapExceededError,
    NoConvergenceError,
    ShufflemixError,
)
from .rng import RngStream, counter_uniform, counter_uniforms, mix64
from .deck_core import (
    Deck,
    ShuffleMode,
    ShuffleSpec,
    apply_move_to_top,
    bottom_to_top_spec,
    make_deck,
    sample_step,
    two_point_spec,
    uniform_weights,
)
from .exact_analysis import (
    MAX_EXACT_N,
    PermDistribution,
    SingleCardMatrix,
    evolve_distribution,
    exact_mixing_time,
    gr_stationary_distribution,
    matrix_spectrum,
    mtf_stationary_distribution,
    mtf_stationary_prob,
    perm_rank,
    perm_unrank,
    single_card_matrix,
    state_permutations,
    stationary_distribution,
    tv_distance,
)
from .coupon_bounds import (
    MtfBoundReport,
    coupon_tail_sum,
    example_weights,
    mtf_lower_bound_time,
    tau_u,
)
from .spectral import (
    CharFamily,
    CharPoly,
    ComplexEigenpair,
    Polynomial,
    RootCertificate,
    SpectralBoundReport,
    WilsonParams,
    b2t_lower_bound,
    build_eigenvector,
    certify_root,
    char_poly,
    complex_eigenpair,
    cpow,
    cpow_range,
    eigen_residual,
    estimate_R,
    find_eigenvalue,
    leading_term_bottom_to_top,
    leading_term_two_point,
    mtf_multi_eigen_T,
    mtf_phi_j,
    newton_refine,
    ordered_start_phi,
    predicted_eigenvalue,
    two_point_lower_bound,
    verify_eigenpair,
    wilson_T,
    wilson_step_scale,
)
from .coupling_sim import (
    B2TTrace,
    CouplingSample,
    CouplingSummary,
    CycleStats,
    FrameChain,
    UStatTrace,
    check_b2t_trace,
    couple_b2t,
    couple_mtf,
    coupling_quantiles,
    cycle_stats,
    shift_frame,
    stationary_mtf_deck,
    u_stat_branch_table,
    u_stat_final_values,
    u_statistic_trace,
    ustat_conditional_means,
)

__version__ = "0.1.0"

__all__ = [
    "B2TTrace",
    "CapExceededError",
    "CapacityError",
    "CharFamily",
    "CharPoly",
    "ComplexEigenpair",
    "CouplingSample",
    "CouplingSummary",
    "CycleStats",
    "Deck",
    "FrameChain",
    "MAX_EXACT_N",
    "MtfBoundReport",
    "NoConvergenceError",
    "PermDistribution",
    "Polynomial",
    "RngStream",
    "RootCertificate",
    "ShuffleMode",
    "ShuffleSpec",
    "ShufflemixError",
    "SingleCardMatrix",
    "SpectralBoundReport",
    "UStatTrace",
    "WilsonParams",
    "apply_move_to_top",
    "b2t_lower_bound",
    "bottom_to_top_spec",
    "build_eigenvector",
    "certify_root",
    "char_poly",
    "check_b2t_trace",
    "complex_eigenpair",
    "counter_uniform",
    "counter_uniforms",
    "coupon_tail_sum",
    "couple_b2t",
    "couple_mtf",
    "coupling_quantiles",
    "cpow",
    "cpow_range",
    "cycle_stats",
    "eigen_residual",
    "estimate_R",
    "evolve_distribution",
    "exact_mixing_time",
    "example_weights",
    "find_eigenvalue",
    "gr_stationary_distribution",
    "leading_term_bottom_to_top",
    "leading_term_two_point",
    "make_deck",
    "matrix_spectrum",
    "mix64",
    "mtf_lower_bound_time",
    "mtf_multi_eigen_T",
    "mtf_phi_j",
    "mtf_stationary_distribution",
    "mtf_stationary_prob",
    "newton_refine",
    "ordered_start_phi",
    "perm_rank",
    "perm_unrank",
    "predicted_eigenvalue",
    "sample_step",
    "shift_frame",
    "single_card_matrix",
    "stationary_distribution",
    "stationary_mtf_deck",
    "state_permutations",
    "tau_u",
    "tv_distance",
    "two_point_lower_bound",
    "two_point_spec",
    "u_stat_branch_table",
    "u_stat_final_values",
    "u_statistic_trace",
    "uniform_weights",
    "ustat_conditional_means",
    "verify_eigenpair",
    "wilson_T",
    "wilson_step_scale",
]
