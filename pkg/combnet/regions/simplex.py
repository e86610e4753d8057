"""
Exact dictionary simplex over Fractions.

Each row reads  s_i + sum_j A[i][j] x_j = b[i]  with every variable
non-negative, and the objective is  z = d + sum_j c[j] x_j  (maximized).
Bland's rule picks entering and leaving variables, so the method
terminates on degenerate problems. Phase one uses a single auxiliary
variable x0 entering every row with coefficient -1.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence

logger = logging.getLogger(__name__)

ZERO = Fraction(0)


class LPStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    status: LPStatus
    x: List[Fraction] = field(default_factory=list)
    value: Optional[Fraction] = None


class Dictionary:
    """Simplex dictionary; labels 0..n-1 are structural, n..n+m-1 slacks."""

    def __init__(self, A: Sequence[Sequence[Fraction]], b: Sequence[Fraction], c: Sequence[Fraction]):
        self.m = len(b)
        self.n = len(c)
        self.A = [list(row) for row in A]
        self.b = list(b)
        self.c = list(c)
        self.d = ZERO
        self.nonbasic = list(range(self.n))
        self.basic = list(range(self.n, self.n + self.m))
        self.pivots = 0

    def pivot(self, i: int, j: int) -> None:
        row = self.A[i]
        inverse = 1 / row[j]
        new_row = [a * inverse for a in row]
        new_row[j] = inverse
        bi = self.b[i] * inverse
        self.A[i] = new_row
        self.b[i] = bi
        for k in range(self.m):
            if k == i:
                continue
            f = self.A[k][j]
            if not f:
                continue
            updated = [a - f * r if r else a for a, r in zip(self.A[k], new_row)]
            updated[j] = -f * inverse
            self.A[k] = updated
            self.b[k] -= f * bi
        cj = self.c[j]
        if cj:
            updated = [a - cj * r if r else a for a, r in zip(self.c, new_row)]
            updated[j] = -cj * inverse
            self.c = updated
            self.d += cj * bi
        self.nonbasic[j], self.basic[i] = self.basic[i], self.nonbasic[j]
        self.pivots += 1

    def _entering(self) -> Optional[int]:
        best = None
        for j, cj in enumerate(self.c):
            if cj > 0 and (best is None or self.nonbasic[j] < self.nonbasic[best]):
                best = j
        return best

    def _leaving(self, j: int, preferred: Optional[int] = None) -> Optional[int]:
        best = None
        best_ratio = None
        for i in range(self.m):
            a = self.A[i][j]
            if a > 0:
                ratio = self.b[i] / a
                if best is None or ratio < best_ratio:
                    best, best_ratio = i, ratio
                elif ratio == best_ratio:
                    if self.basic[i] == preferred or (
                            self.basic[best] != preferred and self.basic[i] < self.basic[best]):
                        best = i
        return best

    def maximize(self, preferred_leaving: Optional[int] = None) -> LPStatus:
        while True:
            j = self._entering()
            if j is None:
                return LPStatus.OPTIMAL
            i = self._leaving(j, preferred_leaving)
            if i is None:
                return LPStatus.UNBOUNDED
            self.pivot(i, j)

    def primal(self, count: int) -> List[Fraction]:
        x = [ZERO] * count
        for i, label in enumerate(self.basic):
            if label < count:
                x[label] = self.b[i]
        return x

    def set_objective(self, objective: Sequence[Fraction]) -> None:
        """Express a structural objective in terms of the current nonbasic variables."""
        self.c = [ZERO] * len(self.nonbasic)
        self.d = ZERO
        for j, label in enumerate(self.nonbasic):
            if label < len(objective):
                self.c[j] += objective[label]
        for i, label in enumerate(self.basic):
            weight = objective[label] if label < len(objective) else ZERO
            if weight:
                self.d += weight * self.b[i]
                self.c = [cj - weight * a if a else cj for cj, a in zip(self.c, self.A[i])]


def _phase_one(D: Dictionary) -> bool:
    """Drive the dictionary to a feasible basis; False when none exists."""
    if all(bi >= 0 for bi in D.b):
        return True
    aux = D.n + D.m
    for row in D.A:
        row.append(Fraction(-1))
    D.nonbasic.append(aux)
    D.c = [ZERO] * (len(D.nonbasic) - 1) + [Fraction(-1)]
    D.d = ZERO
    column = len(D.nonbasic) - 1
    worst = min(range(D.m), key=lambda i: (D.b[i], i))
    D.pivot(worst, column)
    D.maximize(preferred_leaving=aux)
    if D.d < 0:
        return False
    if aux in D.basic:
        i = D.basic.index(aux)
        j = next((j for j, a in enumerate(D.A[i]) if a and D.nonbasic[j] != aux), None)
        if j is None:
            # x0 = 0 identically: the row is implied by the others
            del D.A[i], D.b[i], D.basic[i]
            D.m -= 1
        else:
            D.pivot(i, j)
    column = D.nonbasic.index(aux)
    for row in D.A:
        del row[column]
    del D.nonbasic[column]
    return True


def solve(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction], objective: Sequence[Fraction]) -> LPResult:
    """
    maximize objective . x  subject to  A x <= b,  x >= 0.

    Returns:
        LPResult with status, a primal vertex and the optimal value
    """
    n = len(objective)
    D = Dictionary(A, b, [ZERO] * n)
    if not _phase_one(D):
        logger.debug("LP infeasible after %d pivots (%d rows, %d columns)", D.pivots, D.m, n)
        return LPResult(LPStatus.INFEASIBLE)
    D.set_objective([Fraction(v) for v in objective])
    status = D.maximize()
    logger.debug("LP %s after %d pivots (%d rows, %d columns)", status.value, D.pivots, D.m, n)
    if status is LPStatus.UNBOUNDED:
        return LPResult(LPStatus.UNBOUNDED, D.primal(n))
    return LPResult(LPStatus.OPTIMAL, D.primal(n), D.d)
