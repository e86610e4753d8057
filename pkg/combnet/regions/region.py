"""
Two-dimensional rate regions.

A RateRegion2D is the set of (R1, R2) >= 0 satisfying a list of half-planes
m1*R1 + m2*R2 <= E. Half-planes are stored as primitive integer triples and
kept irredundant, so two regions are equal exactly when their triple sets
are equal.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cmp_to_key
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..errors import MalformedArgumentError, MalformedDocumentError
from ..network.model import CombinationNetwork, EMPTY, group_counts, receiver_mincut
from .fourier_motzkin import primitive
from .simplex import LPStatus, solve

logger = logging.getLogger(__name__)

Halfplane = Tuple[int, int, int]
Point = Tuple[Fraction, Fraction]

ZERO = Fraction(0)


def normalize_halfplane(m1, m2, E) -> Halfplane:
    """Primitive integer triple with the same solution set."""
    if not m1 and not m2:
        raise MalformedArgumentError("half-plane needs a non-zero coefficient")
    (a, b), c = primitive([Fraction(m1), Fraction(m2)], Fraction(E))
    return a, b, c


def _max_over(rows: Sequence[Halfplane], direction: Tuple[int, int]):
    A = [[Fraction(a), Fraction(b)] for a, b, _ in rows]
    return solve(A, [Fraction(E) for _, _, E in rows], [Fraction(direction[0]), Fraction(direction[1])])


def _implied(rows: Sequence[Halfplane], h: Halfplane) -> bool:
    result = _max_over(rows, (h[0], h[1]))
    return result.status is LPStatus.OPTIMAL and result.value <= h[2]


class RegionRelation(str, Enum):
    EQUAL = "equal"
    A_IN_B = "A⊂B"
    B_IN_A = "B⊂A"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class RateRegion2D:
    halfplanes: Tuple[Halfplane, ...]

    @classmethod
    def from_halfplanes(cls, rows: Iterable[Sequence], irredundant: bool = True) -> "RateRegion2D":
        """
        Normalize, deduplicate and (by default) drop implied half-planes.

        Rows implied by R1, R2 >= 0 alone are dropped as well.
        """
        best: Dict[Tuple[int, int], int] = {}
        for row in rows:
            a, b, E = normalize_halfplane(*row)
            if a <= 0 and b <= 0 and E >= 0:
                continue
            if (a, b) not in best or E < best[(a, b)]:
                best[(a, b)] = E
        kept = sorted((a, b, E) for (a, b), E in best.items())
        if irredundant:
            position = 0
            while position < len(kept):
                others = kept[:position] + kept[position + 1:]
                if others and _max_over(others, (0, 0)).status is LPStatus.OPTIMAL and _implied(others, kept[position]):
                    kept.pop(position)
                else:
                    position += 1
        return cls(tuple(kept))

    def contains(self, r1, r2) -> bool:
        r1, r2 = Fraction(r1), Fraction(r2)
        if r1 < 0 or r2 < 0:
            return False
        return all(a * r1 + b * r2 <= E for a, b, E in self.halfplanes)

    def maximum(self, direction: Tuple[int, int]) -> Optional[Fraction]:
        """max of direction . (R1, R2) over the region; None when unbounded or empty."""
        result = _max_over(self.halfplanes, direction)
        return result.value if result.status is LPStatus.OPTIMAL else None

    @property
    def bounded(self) -> bool:
        return self.maximum((1, 0)) is not None and self.maximum((0, 1)) is not None

    def vertices(self) -> List[Point]:
        """
        Corner points, counter-clockwise starting from the origin side.

        Candidates are pairwise intersections of the boundary lines including
        the two axes; unbounded regions list only their finite corners.
        """
        lines = [(Fraction(a), Fraction(b), Fraction(E)) for a, b, E in self.halfplanes]
        lines += [(Fraction(1), ZERO, ZERO), (ZERO, Fraction(1), ZERO)]
        points = set()
        for (a1, b1, c1), (a2, b2, c2) in combinations(lines, 2):
            det = a1 * b2 - a2 * b1
            if det == 0:
                continue
            x = (c1 * b2 - c2 * b1) / det
            y = (a1 * c2 - a2 * c1) / det
            if self.contains(x, y):
                points.add((x, y))
        if not points:
            return []
        cx = sum(p[0] for p in points) / len(points)
        cy = sum(p[1] for p in points) / len(points)

        def half(p: Point) -> int:
            dx, dy = p[0] - cx, p[1] - cy
            return 0 if (dy < 0 or (dy == 0 and dx > 0)) else 1

        def by_angle(p: Point, r: Point) -> int:
            hp, hr = half(p), half(r)
            if hp != hr:
                return hp - hr
            cross = (p[0] - cx) * (r[1] - cy) - (p[1] - cy) * (r[0] - cx)
            return -1 if cross > 0 else (1 if cross < 0 else 0)

        return sorted(points, key=cmp_to_key(by_angle))

    def export_text(self) -> str:
        return "".join(f"{a} {b} {E}\n" for a, b, E in sorted(self.halfplanes))

    def export_vertices_csv(self) -> str:
        return "".join(f"{x.numerator}/{x.denominator},{y.numerator}/{y.denominator}\n"
                       for x, y in self.vertices())

    def to_dict(self) -> Dict[str, List]:
        return {
            "halfplanes": [list(h) for h in sorted(self.halfplanes)],
            "vertices": [[str(x), str(y)] for x, y in self.vertices()],
        }


def parse_region(text: str) -> RateRegion2D:
    """Inverse of RateRegion2D.export_text."""
    rows = []
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise MalformedDocumentError(f"region line {number}: expected 'm1 m2 E', got {line!r}")
        try:
            rows.append(tuple(Fraction(p) for p in parts))
        except ValueError as exc:
            raise MalformedDocumentError(f"region line {number}: {exc}") from exc
    return RateRegion2D.from_halfplanes(rows)


# ============================================================================
# Comparison
# ============================================================================

@dataclass(frozen=True)
class RegionComparison:
    relation: RegionRelation
    a_only: Optional[Point] = None
    b_only: Optional[Point] = None

    def to_dict(self) -> Dict[str, object]:
        payload: Dict[str, object] = {"relation": self.relation.value}
        if self.a_only is not None:
            payload["witness_a_only"] = [str(v) for v in self.a_only]
        if self.b_only is not None:
            payload["witness_b_only"] = [str(v) for v in self.b_only]
        return payload


def _escape(A: RateRegion2D, B: RateRegion2D) -> Optional[Point]:
    """A point of A outside B, or None when A is contained in B."""
    corners = A.vertices() if A.bounded else []
    for a, b, E in B.halfplanes:
        if A.bounded:
            outside = [p for p in corners if a * p[0] + b * p[1] > E]
            if outside:
                return max(outside, key=lambda p: (a * p[0] + b * p[1], p))
            continue
        result = _max_over(A.halfplanes, (a, b))
        if result.status is LPStatus.OPTIMAL:
            if result.value > E:
                return result.x[0], result.x[1]
        elif result.status is LPStatus.UNBOUNDED:
            beyond = list(A.halfplanes) + [(-a, -b, -(E + 1))]
            point = _max_over(beyond, (0, 0))
            return point.x[0], point.x[1]
    return None


def compare(region_a: RateRegion2D, region_b: RateRegion2D) -> RegionComparison:
    """Containment relation between two regions with witness points for strict parts."""
    a_only = _escape(region_a, region_b)
    b_only = _escape(region_b, region_a)
    if a_only is None and b_only is None:
        relation = RegionRelation.EQUAL
    elif a_only is None:
        relation = RegionRelation.A_IN_B
    elif b_only is None:
        relation = RegionRelation.B_IN_A
    else:
        relation = RegionRelation.INCOMPARABLE
    logger.debug("Region comparison: %s", relation.value)
    return RegionComparison(relation, a_only, b_only)


# ============================================================================
# Closed-form regions
# ============================================================================

def cutset_region(net: CombinationNetwork) -> RateRegion2D:
    """R1 <= every receiver's min-cut, R1 + R2 <= every private receiver's min-cut."""
    rows = [(1, 0, receiver_mincut(net, i)) for i in net.receivers]
    rows += [(1, 1, receiver_mincut(net, p)) for p in net.private_receivers]
    return RateRegion2D.from_halfplanes(rows)


def explicit_m2_region(net: CombinationNetwork) -> RateRegion2D:
    """
    Capacity region of a two-public-receiver network in closed form.

    R1 <= min(E1 + E12, E2 + E12), R1 + R2 <= min_p sum_S E_{S,p} and
    2 R1 + R2 <= min_p (E1 + 2 E12 + E2 + E_{phi,p}).
    """
    if net.m != 2:
        raise MalformedArgumentError(f"closed-form region needs exactly two public receivers, got m={net.m}")
    E, Ep = group_counts(net)
    one, two, both = frozenset({1}), frozenset({2}), frozenset({1, 2})
    rows = [(1, 0, E[one] + E[both]), (1, 0, E[two] + E[both])]
    for p in net.private_receivers:
        rows.append((1, 1, sum(Ep[(S, p)] for S in (one, two, both, EMPTY))))
        rows.append((2, 1, E[one] + 2 * E[both] + E[two] + Ep[(EMPTY, p)]))
    return RateRegion2D.from_halfplanes(rows)
