"""Cylindrical algebraic decomposition and quantifier elimination over the
rationals, with generators for corridor motion-planning formulations."""

__version__ = "0.1.0"

from .errors import (
    NullificationError,
    PathQueryError,
    PmcadError,
    ResourceLimitError,
    UsageError,
    WellOrientednessError,
)
from .polynomial import (
    Poly,
    SquarefreeBasis,
    VarOrder,
    discriminant,
    poly_gcd,
    resultant,
    squarefree_coprime_basis,
    squarefree_part,
)
from .realalg import (
    IsolatingInterval,
    RealAlgebraic,
    SamplePoint,
    compare,
    isolate_roots,
    refine,
    roots_over,
    sign_at,
)
from .formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    Exists,
    Forall,
    Formula,
    GridSpec,
    Not,
    Or,
    PrenexForm,
    RootCmp,
    atom,
    conj,
    disj,
    eval_at,
    formula_text,
    free_vars,
    is_quantifier_free,
    mixed_sampler,
    negate_nnf,
    parse,
    sample_equivalent,
    to_prenex,
)
from .projection import (
    ProjectionLevel,
    ProjectionSequence,
    ec_reduced_project,
    mccallum_project,
    project_all,
)
from .cad import (
    CADOptions,
    CADTree,
    Cell,
    QEOptions,
    build_cad,
    partial_truth_lift,
    qe,
    qe_detailed,
    truth_evaluate,
)
from ._adjacency import (
    AdjacencyEdge,
    AdjacencyGraph2D,
    PathResult,
    adjacency_2d,
    path_query,
)
from ._plot2d import plot_2d
from .pianomovers import (
    ACUTE,
    FORMULATION_KINDS,
    Formulation,
    LENGTH_PRESETS,
    OBTUSE,
    ProblemSpec,
    REVERSE_LENGTH_SQUARED,
    RIGHT_ANGLE,
    TRAVERSE_LENGTH_SQUARED,
    gen_acute_invalid,
    gen_angled_wang,
    gen_davenport,
    gen_invalid,
    gen_obtuse_invalid,
    gen_single_endpoint,
    gen_valid,
    gen_wang,
    gen_yangzeng,
    generate,
    reference_acute_length_condition,
    reference_corridor,
    reference_invalid_region,
    reference_obtuse_length_condition,
    reference_obtuse_length_condition_variant,
    reference_solution_length3,
    reference_valid_full,
    reference_valid_region,
)

__all__ = [
    "__version__",
    "PmcadError",
    "UsageError",
    "ResourceLimitError",
    "WellOrientednessError",
    "NullificationError",
    "PathQueryError",
    "VarOrder",
    "Poly",
    "SquarefreeBasis",
    "resultant",
    "discriminant",
    "poly_gcd",
    "squarefree_part",
    "squarefree_coprime_basis",
    "IsolatingInterval",
    "RealAlgebraic",
    "SamplePoint",
    "isolate_roots",
    "refine",
    "compare",
    "sign_at",
    "roots_over",
    "Formula",
    "TRUE",
    "FALSE",
    "Atom",
    "RootCmp",
    "And",
    "Or",
    "Not",
    "Exists",
    "Forall",
    "atom",
    "conj",
    "disj",
    "free_vars",
    "is_quantifier_free",
    "negate_nnf",
    "PrenexForm",
    "to_prenex",
    "GridSpec",
    "eval_at",
    "mixed_sampler",
    "sample_equivalent",
    "formula_text",
    "parse",
    "ProjectionLevel",
    "ProjectionSequence",
    "mccallum_project",
    "ec_reduced_project",
    "project_all",
    "CADOptions",
    "QEOptions",
    "Cell",
    "CADTree",
    "build_cad",
    "truth_evaluate",
    "partial_truth_lift",
    "qe",
    "qe_detailed",
    "AdjacencyEdge",
    "AdjacencyGraph2D",
    "PathResult",
    "adjacency_2d",
    "path_query",
    "plot_2d",
    "ProblemSpec",
    "Formulation",
    "FORMULATION_KINDS",
    "RIGHT_ANGLE",
    "OBTUSE",
    "ACUTE",
    "LENGTH_PRESETS",
    "TRAVERSE_LENGTH_SQUARED",
    "REVERSE_LENGTH_SQUARED",
    "generate",
    "gen_davenport",
    "gen_wang",
    "gen_yangzeng",
    "gen_invalid",
    "gen_valid",
    "gen_single_endpoint",
    "gen_obtuse_invalid",
    "gen_acute_invalid",
    "gen_angled_wang",
    "reference_invalid_region",
    "reference_valid_region",
    "reference_valid_full",
    "reference_corridor",
    "reference_solution_length3",
    "reference_obtuse_length_condition",
    "reference_obtuse_length_condition_variant",
    "reference_acute_length_condition",
]
