"""
Fourier-Motzkin projection onto (R1, R2).

Equalities are substituted away first, then the split variables are
eliminated one at a time in system order. Rows are kept as primitive
integer vectors together with the set of original rows they combine, which
drives Chernikov's rule: after k eliminations a row built from more than
k + 1 original rows is redundant and is dropped on the spot.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Dict, FrozenSet, List, Sequence, Tuple

from ..errors import SolverError
from .simplex import LPStatus, solve
from .systems import LinearSystem, R1, R2, Relation

logger = logging.getLogger(__name__)

# Beyond this many rows an elimination round is followed by LP pruning.
PRUNE_THRESHOLD = 400


@dataclass(frozen=True)
class _Ineq:
    coeffs: Tuple[int, ...]
    rhs: int
    history: FrozenSet[int]


def primitive(coeffs: Sequence[Fraction], rhs: Fraction) -> Tuple[Tuple[int, ...], int]:
    """Scale a row to coprime integers without changing its direction."""
    values = [Fraction(v) for v in coeffs] + [Fraction(rhs)]
    scale = reduce(lambda acc, v: acc * v.denominator // math.gcd(acc, v.denominator), values, 1)
    ints = [int(v * scale) for v in values]
    divisor = reduce(math.gcd, (abs(v) for v in ints), 0) or 1
    ints = [v // divisor for v in ints]
    return tuple(ints[:-1]), ints[-1]


def _substitute_equalities(sys: LinearSystem, keep: Sequence[int]):
    """Use each equality to express one eliminable variable; returns (rows, pivots)."""
    rows: List[Tuple[List[Fraction], Relation, Fraction, int]] = [
        (list(c.coeffs), c.relation, c.rhs, k) for k, c in enumerate(sys.constraints)
    ]
    substituted: List[int] = []
    while True:
        target = None
        for index, (coeffs, relation, rhs, _) in enumerate(rows):
            if relation is not Relation.EQ:
                continue
            candidates = [j for j, a in enumerate(coeffs) if a and j not in keep]
            if candidates:
                target = (index, candidates[-1])
                break
        if target is None:
            break
        index, j = target
        coeffs, _, rhs, _ = rows.pop(index)
        pivot = coeffs[j]
        updated = []
        for other, relation, other_rhs, origin in rows:
            f = other[j]
            if f:
                ratio = f / pivot
                other = [a - ratio * p for a, p in zip(other, coeffs)]
                other[j] = Fraction(0)
                other_rhs = other_rhs - ratio * rhs
            updated.append((other, relation, other_rhs, origin))
        rows = updated
        substituted.append(j)
    return rows, substituted


def _implied(rows: List[_Ineq], candidate: _Ineq, columns: Sequence[int], nonneg: Sequence[int]) -> bool:
    """Whether candidate follows from rows (plus sign bounds on the kept rate columns)."""
    layout = []
    for j in columns:
        layout.append((j, 1))
        if j not in nonneg:
            layout.append((j, -1))
    A = [[Fraction(row.coeffs[j] * s) for j, s in layout] for row in rows]
    b = [Fraction(row.rhs) for row in rows]
    result = solve(A, b, [Fraction(candidate.coeffs[j] * s) for j, s in layout])
    return result.status is LPStatus.OPTIMAL and result.value <= candidate.rhs


def _prune(rows: List[_Ineq], columns: Sequence[int], nonneg: Sequence[int]) -> List[_Ineq]:
    kept = list(rows)
    position = 0
    while position < len(kept):
        others = kept[:position] + kept[position + 1:]
        if others and _implied(others, kept[position], columns, nonneg):
            kept.pop(position)
        else:
            position += 1
    return kept


def _dedupe(rows: List[_Ineq]) -> List[_Ineq]:
    best: Dict[Tuple[int, ...], _Ineq] = {}
    for row in rows:
        held = best.get(row.coeffs)
        if held is None or row.rhs < held.rhs or (row.rhs == held.rhs and len(row.history) < len(held.history)):
            best[row.coeffs] = row
    return list(best.values())


def fourier_motzkin(sys: LinearSystem) -> List[Tuple[int, int, int]]:
    """
    Project the system onto (R1, R2).

    Returns:
        Integer triples (m1, m2, E) meaning m1*R1 + m2*R2 <= E; the result
        is exact but not yet irredundant
    """
    rate_columns = [sys.index(R1), sys.index(R2)]
    raw, substituted = _substitute_equalities(sys, rate_columns)

    rows: List[_Ineq] = []
    for coeffs, relation, rhs, origin in raw:
        oriented = []
        if relation in (Relation.LE, Relation.EQ):
            oriented.append((coeffs, rhs))
        if relation in (Relation.GE, Relation.EQ):
            oriented.append(([-a for a in coeffs], -rhs))
        for c, r in oriented:
            ints, bound = primitive(c, r)
            if not any(ints):
                if bound < 0:
                    raise SolverError(f"{sys.name}: system is infeasible at every rate pair")
                continue
            rows.append(_Ineq(ints, bound, frozenset([origin])))
    rows = _dedupe(rows)

    order = [j for j in range(len(sys.variables)) if j not in rate_columns and j not in substituted]
    remaining = list(order)
    for step, j in enumerate(order, start=1):
        remaining.remove(j)
        positive = [row for row in rows if row.coeffs[j] > 0]
        negative = [row for row in rows if row.coeffs[j] < 0]
        combined = [row for row in rows if row.coeffs[j] == 0]
        for p in positive:
            for n in negative:
                history = p.history | n.history
                if len(history) > step + 1:
                    continue
                a, b = p.coeffs[j], -n.coeffs[j]
                coeffs = [b * x + a * y for x, y in zip(p.coeffs, n.coeffs)]
                ints, bound = primitive(coeffs, b * p.rhs + a * n.rhs)
                if not any(ints):
                    if bound < 0:
                        raise SolverError(f"{sys.name}: system is infeasible at every rate pair")
                    continue
                combined.append(_Ineq(ints, bound, history))
        rows = _dedupe(combined)
        if len(rows) > PRUNE_THRESHOLD:
            rows = _prune(rows, rate_columns + remaining, rate_columns)
        logger.info("%s: eliminated %s, %d rows remain", sys.name, sys.variables[j], len(rows))

    r1, r2 = rate_columns
    return sorted((row.coeffs[r1], row.coeffs[r2], row.rhs) for row in rows)
