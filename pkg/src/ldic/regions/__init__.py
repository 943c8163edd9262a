"""Exact rational rate regions: outer bound, achievable region, elimination."""

from .capacity import (
    ELIMINATION_ORDER,
    RATES,
    SchemeConstants,
    inner_closed_form,
    inner_region,
    origin_region,
    outer_constraints,
    outer_region,
    p_star,
    perfect_feedback_region,
    perfect_feedback_sym_capacity,
    scheme_constants,
    split_region,
    sym_capacity,
    symmetric_params,
)
from .polyhedra import (
    EqualityReport,
    LinearConstraint,
    RateRegion,
    UnboundedRegionError,
    canonicalize,
    constraint,
    eliminate,
    fourier_motzkin,
    is_redundant,
    region_equal,
    region_subset,
    symmetric_rate,
    vertices,
)

__all__ = [
    "ELIMINATION_ORDER",
    "RATES",
    "EqualityReport",
    "LinearConstraint",
    "RateRegion",
    "SchemeConstants",
    "UnboundedRegionError",
    "canonicalize",
    "constraint",
    "eliminate",
    "fourier_motzkin",
    "inner_closed_form",
    "inner_region",
    "is_redundant",
    "origin_region",
    "outer_constraints",
    "outer_region",
    "p_star",
    "perfect_feedback_region",
    "perfect_feedback_sym_capacity",
    "region_equal",
    "region_subset",
    "scheme_constants",
    "split_region",
    "sym_capacity",
    "symmetric_params",
    "symmetric_rate",
    "vertices",
]
