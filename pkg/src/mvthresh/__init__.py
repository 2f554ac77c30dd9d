"""Symbolic reliability analysis of multi-state truly-threshold systems."""
from .boundary import BoundaryVectorSet, enumerate_mlvs, enumerate_muvs, verify_boundary_minimality
from .expr import (
    Form,
    MvLiteral,
    Perspective,
    ProductTerm,
    SopExpression,
    boole_shannon_pre,
    build_pre,
    denotation,
    disjoint_via_reflection,
    instance_expression,
    is_disjoint_pair,
    is_pre,
    minimal_sop,
    parse_expression,
    shellable_disjoint_cover,
    sop_from_mlvs,
    sop_from_muvs,
)
from .model import (
    SystemSpec,
    check_binary_imaged,
    check_coherence,
    check_total_symmetry,
    evaluate_structure,
    level_success,
    running_example,
    validate_spec,
)
from .oracle import assert_equivalent, build_table, oracle_probability
from .probability import (
    ComponentDistribution,
    expectation_of_pre,
    level_probabilities_failure,
    level_probabilities_success,
)

__version__ = "0.1.0"
