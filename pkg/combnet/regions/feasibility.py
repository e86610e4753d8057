"""
Exact feasibility, optimization and Farkas certificates for LinearSystem.

Every variable of a LinearSystem is free; sign constraints are ordinary
rows. Single-variable sign rows are folded into variable bounds before the
simplex runs, and their multipliers are recovered afterwards so that
certificates always refer to the rows of the original system.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from ..errors import SolverError
from .simplex import LPStatus, solve
from .systems import Constraint, LinearSystem, RateSplit, Relation, R1, R2, to_fraction

logger = logging.getLogger(__name__)

ZERO = Fraction(0)


@dataclass
class Witness:
    """A solution of the system, verified by substitution."""
    values: Dict[str, Fraction]
    system: str = ""

    feasible = True

    def split(self, sys: LinearSystem, prefix: Optional[str] = None) -> RateSplit:
        if prefix is None:
            prefix = sys.split_variables()[0].split("{")[0]
        return sys.split_of(self.values, prefix)

    def verify(self, sys: LinearSystem) -> bool:
        return not sys.violated(self.values)

    def to_dict(self) -> Dict[str, str]:
        return {name: str(value) for name, value in self.values.items()}


@dataclass
class FarkasCertificate:
    """
    Signed multipliers lambda_k, one per system row.

    lambda_k >= 0 on <= rows, <= 0 on >= rows, free on = rows. The weighted
    row sum has zero coefficients on every unfixed variable and a negative
    right-hand side, so the rows cannot hold together.
    """
    multipliers: Dict[int, Fraction]
    fixed: Dict[str, Fraction] = field(default_factory=dict)
    system: str = ""

    feasible = False

    def verify(self, sys: LinearSystem) -> bool:
        free = [j for j, name in enumerate(sys.variables) if name not in self.fixed]
        fixed_vec = sys.vector(self.fixed)
        totals = [ZERO] * len(sys.variables)
        rhs = ZERO
        for k, weight in self.multipliers.items():
            row = sys.constraints[k]
            if row.relation is Relation.LE and weight < 0:
                return False
            if row.relation is Relation.GE and weight > 0:
                return False
            for j, a in enumerate(row.coeffs):
                if a:
                    totals[j] += weight * a
            rhs += weight * (row.rhs - row.lhs(fixed_vec))
        return all(totals[j] == 0 for j in free) and rhs < 0

    def rows(self, sys: LinearSystem) -> List[Tuple[str, Fraction]]:
        return [(sys.constraints[k].label, w) for k, w in sorted(self.multipliers.items()) if w]

    def to_dict(self, sys: LinearSystem) -> Dict[str, str]:
        return {label: str(w) for label, w in self.rows(sys)}


FeasibilityResult = Union[Witness, FarkasCertificate]


@dataclass
class Optimum:
    status: LPStatus
    value: Optional[Fraction] = None
    values: Dict[str, Fraction] = field(default_factory=dict)


# ============================================================================
# Standard form
# ============================================================================

@dataclass
class _Row:
    coeffs: List[Fraction]
    rhs: Fraction
    origin: int
    sign: int


class _StandardForm:
    """A x <= b, x >= 0 over column copies of the unfixed variables."""

    def __init__(self, sys: LinearSystem, fixed: Mapping[str, Fraction]):
        self.sys = sys
        self.fixed = {name: to_fraction(v) for name, v in fixed.items()}
        unknown = [name for name in self.fixed if name not in sys.variables]
        if unknown:
            raise SolverError(f"cannot fix unknown variables {unknown}")
        fixed_vec = sys.vector(self.fixed)
        self.free = [j for j, name in enumerate(sys.variables) if name not in self.fixed]
        self.nonneg: Dict[int, int] = {}
        self.empty_violation: Optional[Tuple[int, int]] = None

        rows: List[_Row] = []
        for k, con in enumerate(sys.constraints):
            coeffs = [con.coeffs[j] for j in self.free]
            rhs = con.rhs - con.lhs(fixed_vec)
            support = [t for t, a in enumerate(coeffs) if a]
            if len(support) == 1 and rhs == 0:
                a = coeffs[support[0]]
                if (con.relation is Relation.GE and a > 0) or (con.relation is Relation.LE and a < 0):
                    self.nonneg.setdefault(support[0], k)
                    continue
            oriented = []
            if con.relation in (Relation.LE, Relation.EQ):
                oriented.append((coeffs, rhs, 1))
            if con.relation in (Relation.GE, Relation.EQ):
                oriented.append(([-a for a in coeffs], -rhs, -1))
            for row_coeffs, row_rhs, sign in oriented:
                if not support:
                    if row_rhs < 0 and self.empty_violation is None:
                        self.empty_violation = (k, sign)
                    continue
                rows.append(_Row(row_coeffs, row_rhs, k, sign))

        best: Dict[Tuple[Fraction, ...], _Row] = {}
        for row in rows:
            key = tuple(row.coeffs)
            if key not in best or row.rhs < best[key].rhs:
                best[key] = row
        self.rows = list(best.values())

        self.columns: List[Tuple[int, int]] = []
        for t in range(len(self.free)):
            self.columns.append((t, 1))
            if t not in self.nonneg:
                self.columns.append((t, -1))

    def matrix(self) -> Tuple[List[List[Fraction]], List[Fraction]]:
        A = [[row.coeffs[t] * s for t, s in self.columns] for row in self.rows]
        return A, [row.rhs for row in self.rows]

    def lift(self, objective: Mapping[str, Fraction]) -> Tuple[List[Fraction], Fraction]:
        c = [to_fraction(objective.get(self.sys.variables[self.free[t]], 0)) * s for t, s in self.columns]
        constant = sum((to_fraction(objective.get(name, 0)) * v for name, v in self.fixed.items()), ZERO)
        return c, constant

    def values(self, x: Sequence[Fraction]) -> Dict[str, Fraction]:
        out = {name: self.fixed[name] for name in self.sys.variables if name in self.fixed}
        for t, j in enumerate(self.free):
            out[self.sys.variables[j]] = ZERO
        for (t, s), v in zip(self.columns, x):
            out[self.sys.variables[self.free[t]]] += s * v
        return {name: out[name] for name in self.sys.variables}

    def farkas(self) -> FarkasCertificate:
        if self.empty_violation is not None:
            k, sign = self.empty_violation
            return FarkasCertificate({k: Fraction(sign)}, dict(self.fixed), self.sys.name)

        # Dual LP over y >= 0 (one per LP row): y G = 0 on free columns,
        # y G >= 0 on bounded columns, y b <= -1, minimize sum y.
        count = len(self.rows)
        A: List[List[Fraction]] = []
        b: List[Fraction] = []
        for t in range(len(self.free)):
            column = [row.coeffs[t] for row in self.rows]
            A.append([-a for a in column])
            b.append(ZERO)
            if t not in self.nonneg:
                A.append(column)
                b.append(ZERO)
        A.append([row.rhs for row in self.rows])
        b.append(Fraction(-1))
        result = solve(A, b, [Fraction(-1)] * count)
        if result.status is not LPStatus.OPTIMAL:
            raise SolverError("primal infeasible but no Farkas multipliers found")
        y = result.x

        multipliers: Dict[int, Fraction] = {}
        for row, weight in zip(self.rows, y):
            if weight:
                multipliers[row.origin] = multipliers.get(row.origin, ZERO) + row.sign * weight
        for t, k in self.nonneg.items():
            slack = sum((w * row.coeffs[t] for row, w in zip(self.rows, y) if w), ZERO)
            if slack:
                a = self.sys.constraints[k].coeffs[self.free[t]]
                multipliers[k] = multipliers.get(k, ZERO) - slack / a
        return FarkasCertificate({k: w for k, w in multipliers.items() if w}, dict(self.fixed), self.sys.name)


# ============================================================================
# Public entry points
# ============================================================================

def feasible(sys: LinearSystem, r1, r2, fixed: Optional[Mapping[str, object]] = None) -> FeasibilityResult:
    """
    Decide whether the system holds at the rate pair (r1, r2).

    Returns:
        Witness with every variable's value, or FarkasCertificate; both are
        verified by exact substitution before they are returned
    """
    pinned: Dict[str, Fraction] = {R1: to_fraction(r1), R2: to_fraction(r2)}
    for name, value in (fixed or {}).items():
        pinned[name] = to_fraction(value)
    return check(sys, pinned)


def check(sys: LinearSystem, fixed: Mapping[str, Fraction]) -> FeasibilityResult:
    """Feasibility with an arbitrary set of pinned variables."""
    form = _StandardForm(sys, fixed)
    if form.empty_violation is None:
        A, b = form.matrix()
        result = solve(A, b, [ZERO] * len(form.columns))
        if result.status is LPStatus.OPTIMAL:
            witness = Witness(form.values(result.x), sys.name)
            if not witness.verify(sys):
                raise SolverError(f"{sys.name}: simplex witness fails substitution")
            return witness
    certificate = form.farkas()
    if not certificate.verify(sys):
        raise SolverError(f"{sys.name}: Farkas certificate fails verification")
    logger.debug("%s infeasible at %s", sys.name, {k: str(v) for k, v in fixed.items()})
    return certificate


def optimize(sys: LinearSystem, objective: Mapping[str, object],
             fixed: Optional[Mapping[str, object]] = None, maximize: bool = True) -> Optimum:
    """Exact optimum of a linear objective over the system."""
    pinned = {name: to_fraction(v) for name, v in (fixed or {}).items()}
    form = _StandardForm(sys, pinned)
    if form.empty_violation is not None:
        return Optimum(LPStatus.INFEASIBLE)
    weights = {name: to_fraction(v) for name, v in objective.items()}
    if not maximize:
        weights = {name: -v for name, v in weights.items()}
    c, constant = form.lift(weights)
    A, b = form.matrix()
    result = solve(A, b, c)
    if result.status is LPStatus.INFEASIBLE:
        return Optimum(LPStatus.INFEASIBLE)
    values = form.values(result.x)
    if result.status is LPStatus.UNBOUNDED:
        return Optimum(LPStatus.UNBOUNDED, None, values)
    value = result.value + constant
    return Optimum(LPStatus.OPTIMAL, value if maximize else -value, values)


def integer_optimize(sys: LinearSystem, objective: Mapping[str, object], integer_vars: Iterable[str],
                     fixed: Optional[Mapping[str, object]] = None, maximize: bool = False,
                     node_limit: int = 500, incumbent: Optional[Dict[str, Fraction]] = None) -> Optional[Optimum]:
    """
    Depth-first branch and bound.

    Args:
        integer_vars: Variables that must take integer values
        incumbent: Optional known integral solution used for pruning

    Returns:
        Best integral Optimum found, or None when there is none within the node limit
    """
    integer_vars = list(integer_vars)
    weights = {name: to_fraction(v) for name, v in objective.items()}
    best: Optional[Optimum] = None
    if incumbent is not None:
        value = sum((w * to_fraction(incumbent.get(name, 0)) for name, w in weights.items()), ZERO)
        best = Optimum(LPStatus.OPTIMAL, value, dict(incumbent))

    def improves(value: Fraction) -> bool:
        if best is None:
            return True
        return value > best.value if maximize else value < best.value

    stack: List[List[Constraint]] = [[]]
    nodes = 0
    while stack:
        nodes += 1
        if nodes > node_limit:
            logger.warning("Branch and bound stopped after %d nodes", node_limit)
            break
        extra = stack.pop()
        node = optimize(sys.with_constraints(extra), weights, fixed, maximize)
        if node.status is not LPStatus.OPTIMAL or not improves(node.value):
            continue
        fractional = next((name for name in integer_vars if node.values[name].denominator != 1), None)
        if fractional is None:
            best = node
            logger.debug("Branch and bound incumbent %s after %d nodes", node.value, nodes)
            continue
        v = node.values[fractional]
        stack.append(extra + [sys.row({fractional: 1}, Relation.GE, math.ceil(v), f"branch[{fractional}]")])
        stack.append(extra + [sys.row({fractional: 1}, Relation.LE, math.floor(v), f"branch[{fractional}]")])
    return best


def integer_feasible(sys: LinearSystem, integer_vars: Iterable[str],
                     fixed: Optional[Mapping[str, object]] = None, node_limit: int = 500) -> Optional[Dict[str, Fraction]]:
    """An integral solution of the system, or None."""
    found = integer_optimize(sys, {}, integer_vars, fixed=fixed, node_limit=node_limit)
    return found.values if found is not None else None
