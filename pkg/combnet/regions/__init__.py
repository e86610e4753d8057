"""
Rate-region package.

Scheme constraint systems, exact feasibility with witnesses and Farkas
certificates, projection to two-dimensional regions and region comparison.
"""

from .systems import (
    R1,
    R2,
    Relation,
    Scheme,
    Constraint,
    RateSplit,
    LinearSystem,
    split_name,
    family_label,
    prop1_system,
    thm1_system,
    relaxed_system,
    thm2_system,
    multicast_system,
    block_markov_system,
    build_system,
)

from .simplex import (
    LPStatus,
    LPResult,
    solve,
)

from .feasibility import (
    Witness,
    FarkasCertificate,
    FeasibilityResult,
    Optimum,
    feasible,
    check,
    optimize,
    integer_optimize,
    integer_feasible,
)

from .fourier_motzkin import (
    fourier_motzkin,
    primitive,
)

from .region import (
    Halfplane,
    RateRegion2D,
    RegionRelation,
    RegionComparison,
    normalize_halfplane,
    parse_region,
    compare,
    cutset_region,
    explicit_m2_region,
)

from .projection import (
    PROJECTION_METHODS,
    lp_facets,
    project,
)

__all__ = [
    # Systems
    "R1",
    "R2",
    "Relation",
    "Scheme",
    "Constraint",
    "RateSplit",
    "LinearSystem",
    "split_name",
    "family_label",
    "prop1_system",
    "thm1_system",
    "relaxed_system",
    "thm2_system",
    "multicast_system",
    "block_markov_system",
    "build_system",

    # Exact LP
    "LPStatus",
    "LPResult",
    "solve",

    # Feasibility
    "Witness",
    "FarkasCertificate",
    "FeasibilityResult",
    "Optimum",
    "feasible",
    "check",
    "optimize",
    "integer_optimize",
    "integer_feasible",

    # Projection
    "PROJECTION_METHODS",
    "fourier_motzkin",
    "primitive",
    "lp_facets",
    "project",

    # Regions
    "Halfplane",
    "RateRegion2D",
    "RegionRelation",
    "RegionComparison",
    "normalize_halfplane",
    "parse_region",
    "compare",
    "cutset_region",
    "explicit_m2_region",
]
