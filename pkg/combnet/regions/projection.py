"""
Projection of a constraint system onto the (R1, R2) plane.

Small systems go through Fourier-Motzkin elimination. Systems with more
than FM_SPLIT_LIMIT split variables (four public receivers) are projected by
discovering the facets of the two-dimensional shadow with exact LPs instead:
the shadow is down-closed, so starting from its two axis intercepts every
edge is found by maximizing the normal of the chord between two known
boundary points.
"""

import logging
from fractions import Fraction
from typing import List, Optional, Tuple

from ..errors import MalformedArgumentError, SolverError
from ..network.model import check_size
from .feasibility import FarkasCertificate, feasible, optimize
from .fourier_motzkin import fourier_motzkin
from .region import RateRegion2D
from .simplex import LPStatus
from .systems import LinearSystem, R1, R2, Relation

logger = logging.getLogger(__name__)

FM_SPLIT_LIMIT = 8

PROJECTION_METHODS = ("auto", "fm", "lp")


def _with_rate_signs(sys: LinearSystem) -> LinearSystem:
    return sys.with_constraints([
        sys.row({R1: 1}, Relation.GE, 0, "rate[R1]"),
        sys.row({R2: 1}, Relation.GE, 0, "rate[R2]"),
    ])


def _axis_max(sys: LinearSystem, variable: str) -> Optional[Fraction]:
    result = optimize(sys, {variable: 1})
    if result.status is LPStatus.INFEASIBLE:
        raise SolverError(f"{sys.name}: no rate pair is feasible")
    return result.value if result.status is LPStatus.OPTIMAL else None


def _check_down_closed(sys: LinearSystem, r1_max: Fraction, r2_max: Fraction) -> None:
    """The chord walk starts from the origin and both axis intercepts; all three must be feasible."""
    for point in ((Fraction(0), Fraction(0)), (r1_max, Fraction(0)), (Fraction(0), r2_max)):
        if isinstance(feasible(sys, *point), FarkasCertificate):
            raise SolverError(f"{sys.name}: shadow is not down-closed, ({point[0]}, {point[1]}) is infeasible",
                              r1=str(point[0]), r2=str(point[1]))


def lp_facets(sys: LinearSystem) -> List[Tuple[Fraction, Fraction, Fraction]]:
    """
    Facets of the down-closed (R1, R2) shadow by chord refinement.

    Returns:
        Half-planes (m1, m2, E) with non-negative normals; an unbounded R2
        direction yields the single row R1 <= max R1
    """
    bounded = _with_rate_signs(sys)
    r1_max = _axis_max(bounded, R1)
    if r1_max is None:
        raise SolverError(f"{sys.name}: R1 is unbounded")
    r2_max = _axis_max(bounded, R2)
    if r2_max is None:
        logger.info("%s: R2 unbounded, region is a vertical strip", sys.name)
        return [(Fraction(1), Fraction(0), r1_max)]
    _check_down_closed(sys, r1_max, r2_max)
    if r1_max == 0 or r2_max == 0:
        return [(Fraction(1), Fraction(0), r1_max), (Fraction(0), Fraction(1), r2_max)]

    facets = []
    chords = [((Fraction(0), r2_max), (r1_max, Fraction(0)))]
    while chords:
        u, v = chords.pop()
        normal = (u[1] - v[1], v[0] - u[0])
        result = optimize(bounded, {R1: normal[0], R2: normal[1]})
        if result.status is not LPStatus.OPTIMAL:
            raise SolverError(f"{sys.name}: chord refinement lost boundedness")
        level = normal[0] * u[0] + normal[1] * u[1]
        if result.value == level:
            facets.append((normal[0], normal[1], level))
            continue
        w = (result.values[R1], result.values[R2])
        chords.append((w, v))
        chords.append((u, w))
    logger.info("%s: %d facets from chord refinement", sys.name, len(facets))
    return facets


def project(sys: LinearSystem, method: str = "auto") -> RateRegion2D:
    """
    Eliminate every split variable.

    Args:
        sys: Any of the scheme systems
        method: "fm", "lp" or "auto" (FM up to FM_SPLIT_LIMIT split variables)

    Returns:
        Irredundant region equal to {(R1, R2) >= 0 : sys feasible}
    """
    check_size(sys.m)
    if method not in PROJECTION_METHODS:
        raise MalformedArgumentError(f"unknown projection method {method!r}")
    if method == "auto":
        method = "fm" if len(sys.variables) - 2 <= FM_SPLIT_LIMIT else "lp"
    rows = fourier_motzkin(sys) if method == "fm" else lp_facets(sys)
    region = RateRegion2D.from_halfplanes(rows)
    logger.info("Projected %s (%s): %d half-planes", sys.name, method, len(region.halfplanes))
    return region
