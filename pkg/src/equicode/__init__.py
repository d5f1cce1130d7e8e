"""Spherical codes and equiangular line systems: construction and certification."""

from .certificate import Certificate
from .codes import (
    AngleParams,
    AngleSet,
    Code,
    ValidationReport,
    angle_set_after_projection,
    angle_set_of,
    detect_equiangular,
    detect_projection_params,
    gram_of,
    predicted_projection_angle,
    project_onto_complement,
    span_inner_product,
    switch_vertices,
    validate_code,
)
from .constructions import (
    ConcatParams,
    ConcatReport,
    RngStream,
    binary_kcode,
    concatenated_code,
    lemmens_seidel_code,
    lemmens_seidel_gram,
    lines28_gram,
    odd_reciprocal_code,
    odd_reciprocal_gram,
    random_unit_vectors,
    regular_simplex,
    seven_dim_28_lines,
    simplex_gram,
)
from .bounds import (
    BoundTable,
    beta_energy_check,
    bound_table,
    dgs_bound_check,
    gerzon_certificate,
    matching_full_rank_certificate,
    multipartite_certificate,
    negative_clique_certificate,
    schnirelman_applied_certificate,
)
from .graphlab import (
    BallSubgraph,
    LabelledGraph,
    MonochromaticPair,
    NegativeStructure,
    ReductionOutcome,
    ball_subgraph_lambda,
    build_graph,
    catalog_lambda_checks,
    find_clique,
    gamma_degree_stats,
    greedy_independent_set,
    lambda1,
    lambda_inequality_check,
    negative_structure_report,
    ramsey_pair,
    reduction_pipeline,
    verify_monochromatic,
)
from .matcore import (
    DEFAULT_TOL,
    Spectrum,
    SymMatrix,
    Tolerance,
    embed_from_gram,
    is_psd,
    quadratic_form,
    rank_of,
    sym_eigen,
    trace_rank_lower_bound,
)

__version__ = "0.1.0"
