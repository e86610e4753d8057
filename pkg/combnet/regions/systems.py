"""
Rate-Region Constraint Systems

Exact rational linear systems over (R1, R2) and one split variable per
subset S of the public receivers. Four schemes are built from the same
ingredient rows:

    prop1_system      zero-structured linear superposition, every alpha_S >= 0
    thm1_system       pre-encoded W2, alpha_phi may be negative
    thm2_system       block-Markov scheme in gamma = alpha - beta form
    multicast_system  multicast code that lets publics decode their
                      superposed messages (run on an extended network)

relaxed_system and block_markov_system are the relaxed non-negativity form
of thm1_system and the un-substituted (alpha, beta) form of thm2_system.
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from ..network.families import families_within, saturated_families
from ..network.model import (
    EMPTY,
    CombinationNetwork,
    SetFamily,
    Subset,
    check_size,
    format_subset,
    group_counts,
    power_set,
    up_closure,
)

logger = logging.getLogger(__name__)

R1 = "R1"
R2 = "R2"


class Relation(str, Enum):
    LE = "<="
    EQ = "="
    GE = ">="


class Scheme(str, Enum):
    """Which achievable scheme a system describes."""
    PROP1 = "prop1"
    THM1 = "thm1"
    THM2 = "thm2"
    MULTICAST = "multicast"
    RELAXED = "relaxed"
    BLOCK_MARKOV = "block_markov"


def to_fraction(value) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


@dataclass(frozen=True)
class Constraint:
    """coeffs . x (relation) rhs, coefficients aligned with the system variables."""
    coeffs: Tuple[Fraction, ...]
    relation: Relation
    rhs: Fraction
    label: str = ""

    def lhs(self, values: Sequence[Fraction]) -> Fraction:
        return sum((a * v for a, v in zip(self.coeffs, values) if a), Fraction(0))

    def holds(self, values: Sequence[Fraction]) -> bool:
        value = self.lhs(values)
        if self.relation is Relation.LE:
            return value <= self.rhs
        if self.relation is Relation.GE:
            return value >= self.rhs
        return value == self.rhs


@dataclass(frozen=True)
class RateSplit:
    """Rational split values indexed by subsets of the public receivers."""
    values: Mapping[Subset, Fraction] = field(default_factory=dict)

    def __getitem__(self, S: Subset) -> Fraction:
        return self.values.get(frozenset(S), Fraction(0))

    def items(self):
        return self.values.items()

    def total(self) -> Fraction:
        return sum(self.values.values(), Fraction(0))

    def support(self) -> List[Subset]:
        return [S for S, v in self.values.items() if v != 0]

    def negative_part(self, S: Subset) -> Fraction:
        """min(value, 0)."""
        return min(self[S], Fraction(0))

    def scaled(self, n: int) -> "RateSplit":
        return RateSplit({S: v * n for S, v in self.values.items()})

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.values.values())

    def as_integers(self) -> Dict[Subset, int]:
        if not self.is_integral():
            raise ValueError("rate split has non-integer entries")
        return {S: int(v) for S, v in self.values.items()}

    def describe(self, symbol: str = "alpha") -> str:
        parts = [f"{symbol}{format_subset(S)}={v}" for S, v in sorted(
            self.values.items(), key=lambda item: (-len(item[0]), sorted(item[0]))) if v != 0]
        return " ".join(parts) if parts else "all zero"

    @classmethod
    def of(cls, values: Mapping[Iterable[int], object]) -> "RateSplit":
        return cls({frozenset(S): to_fraction(v) for S, v in values.items()})


@dataclass
class LinearSystem:
    """Named variables plus labelled constraints; groups maps split variables to their subset."""
    name: str
    m: int
    variables: List[str]
    constraints: List[Constraint]
    groups: Dict[str, Subset] = field(default_factory=dict)

    def index(self, variable: str) -> int:
        return self.variables.index(variable)

    def split_variables(self, prefix: Optional[str] = None) -> List[str]:
        return [v for v in self.variables if v in self.groups and (prefix is None or v.startswith(prefix))]

    def vector(self, values: Mapping[str, Fraction]) -> List[Fraction]:
        return [to_fraction(values.get(v, 0)) for v in self.variables]

    def violated(self, values: Mapping[str, Fraction]) -> List[Constraint]:
        vec = self.vector(values)
        return [c for c in self.constraints if not c.holds(vec)]

    def split_of(self, values: Mapping[str, Fraction], prefix: str) -> RateSplit:
        return RateSplit({self.groups[v]: to_fraction(values.get(v, 0))
                          for v in self.split_variables(prefix)})

    def with_constraints(self, extra: Iterable[Constraint]) -> "LinearSystem":
        return replace(self, constraints=self.constraints + list(extra))

    def row(self, terms: Mapping[str, object], relation: Relation, rhs, label: str = "") -> Constraint:
        coeffs = [Fraction(0)] * len(self.variables)
        for name, value in terms.items():
            coeffs[self.index(name)] += to_fraction(value)
        return Constraint(tuple(coeffs), relation, to_fraction(rhs), label)


def split_name(prefix: str, S: Subset) -> str:
    return prefix + format_subset(S)


def family_label(family: SetFamily) -> str:
    return "{" + ",".join(format_subset(S) for S in sorted(family, key=lambda S: (len(S), sorted(S)))) + "}"


# ============================================================================
# Row builders shared by the schemes
# ============================================================================

class _Builder:
    def __init__(self, name: str, net: CombinationNetwork, prefixes: Sequence[str]):
        check_size(net.m)
        self.net = net
        self.groups = power_set(net.m)
        self.E, self.Ep = group_counts(net)
        variables = [R1, R2]
        groups: Dict[str, Subset] = {}
        for prefix in prefixes:
            for S in self.groups:
                variables.append(split_name(prefix, S))
                groups[split_name(prefix, S)] = S
        self.system = LinearSystem(name=name, m=net.m, variables=variables, constraints=[], groups=groups)

    def add(self, terms: Dict[str, object], relation: Relation, rhs, label: str) -> None:
        self.system.constraints.append(self.system.row(terms, relation, rhs, label))

    def nonnegative(self, prefix: str, skip_empty: bool = False) -> None:
        for S in self.groups:
            if skip_empty and S == EMPTY:
                continue
            self.add({split_name(prefix, S): 1}, Relation.GE, 0, f"nonneg[{prefix}{format_subset(S)}]")

    def rate_sum(self, prefix: str, minus: Optional[str] = None) -> None:
        """R2 = sum of the split (minus the virtual split when given)."""
        terms: Dict[str, object] = {R2: 1}
        for S in self.groups:
            terms[split_name(prefix, S)] = -1
            if minus:
                terms[split_name(minus, S)] = 1
        self.add(terms, Relation.EQ, 0, "sum")

    def public_rows(self, prefix: str, minus: Optional[str] = None) -> None:
        for i in self.net.public_receivers:
            terms: Dict[str, object] = {R1: 1}
            for S in self.groups:
                if i in S:
                    terms[split_name(prefix, S)] = 1
                    if minus:
                        terms[split_name(minus, S)] = -1
            self.add(terms, Relation.LE, sum(self.E[S] for S in self.groups if i in S), f"public[{i}]")

    def family_rows(self, prefix: str, minus: Optional[str] = None) -> None:
        """Public i decodes every superposed message it sees (families inside {i}*)."""
        for i in self.net.public_receivers:
            star = up_closure({i}, self.net.m)
            for family in families_within(star, self.net.m):
                outside = [S for S in star if S not in family]
                terms: Dict[str, object] = {}
                for S in outside:
                    terms[split_name(prefix, S)] = 1
                    if minus:
                        terms[split_name(minus, S)] = -1
                self.add(terms, Relation.LE, sum(self.E[S] for S in outside),
                         f"family[{i}|{family_label(family)}]")

    def private_rows(self, prefix: str, virtual: Optional[str] = None) -> None:
        for family in saturated_families(self.net.m):
            for p in self.net.private_receivers:
                terms: Dict[str, object] = {R2: 1}
                for S in family:
                    terms[split_name(prefix, S)] = -1
                    if virtual:
                        terms[split_name(virtual, S)] = 1
                rhs = sum(self.Ep[(S, p)] for S in self.groups if S not in family)
                self.add(terms, Relation.LE, rhs, f"private[{family_label(family)}|{p}]")

    def cut_rows(self) -> None:
        for p in self.net.private_receivers:
            self.add({R1: 1, R2: 1}, Relation.LE, sum(self.Ep[(S, p)] for S in self.groups), f"cut[{p}]")

    def positivity_rows(self, prefix: str, label: str, skip_empty_family: bool = True) -> None:
        for family in saturated_families(self.net.m):
            if skip_empty_family and not family:
                continue
            self.add({split_name(prefix, S): 1 for S in family}, Relation.GE, 0,
                     f"{label}[{family_label(family)}]")

    def hall_rows(self, alpha: str, beta: str) -> None:
        for family in saturated_families(self.net.m):
            if not family:
                continue
            terms: Dict[str, object] = {}
            for S in family:
                terms[split_name(beta, S)] = 1
                terms[split_name(alpha, S)] = -1
            self.add(terms, Relation.LE, 0, f"hall[{family_label(family)}]")

    def done(self) -> LinearSystem:
        logger.debug("Built %s system: %d variables, %d constraints",
                     self.system.name, len(self.system.variables), len(self.system.constraints))
        return self.system


# ============================================================================
# Schemes
# ============================================================================

def prop1_system(net: CombinationNetwork) -> LinearSystem:
    """Zero-structured linear superposition: every alpha_S >= 0."""
    b = _Builder(Scheme.PROP1.value, net, ["alpha"])
    b.nonnegative("alpha")
    b.rate_sum("alpha")
    b.public_rows("alpha")
    b.private_rows("alpha")
    b.cut_rows()
    return b.done()


def thm1_system(net: CombinationNetwork) -> LinearSystem:
    """Pre-encoded scheme: as prop1_system without alpha_phi >= 0."""
    b = _Builder(Scheme.THM1.value, net, ["alpha"])
    b.nonnegative("alpha", skip_empty=True)
    b.rate_sum("alpha")
    b.public_rows("alpha")
    b.private_rows("alpha")
    b.cut_rows()
    return b.done()


def relaxed_system(net: CombinationNetwork) -> LinearSystem:
    """thm1_system with sum over L of alpha_S >= 0 per non-empty saturated L instead of per-S signs."""
    b = _Builder(Scheme.RELAXED.value, net, ["alpha"])
    b.positivity_rows("alpha", "relaxed")
    b.rate_sum("alpha")
    b.public_rows("alpha")
    b.private_rows("alpha")
    b.cut_rows()
    return b.done()


def thm2_system(net: CombinationNetwork) -> LinearSystem:
    """Block-Markov scheme over gamma_S = alpha_S - beta_S."""
    b = _Builder(Scheme.THM2.value, net, ["gamma"])
    b.positivity_rows("gamma", "positivity", skip_empty_family=False)
    b.rate_sum("gamma")
    b.family_rows("gamma")
    b.public_rows("gamma")
    b.private_rows("gamma")
    b.cut_rows()
    return b.done()


def multicast_system(net: CombinationNetwork) -> LinearSystem:
    """
    Multicast code in which each public i also decodes every W2^S with S containing i.

    R2 here is the multicast rate R2' = sum alpha_S. Virtual resources enter
    through the network's group counts, so pass an extended network.
    """
    b = _Builder(Scheme.MULTICAST.value, net, ["alpha"])
    b.nonnegative("alpha")
    b.rate_sum("alpha")
    b.family_rows("alpha")
    b.public_rows("alpha")
    b.private_rows("alpha")
    b.cut_rows()
    return b.done()


def block_markov_system(net: CombinationNetwork) -> LinearSystem:
    """
    thm2_system before substituting gamma = alpha - beta.

    Variables R1, R2, alpha_S, beta_S with alpha, beta >= 0. The rows are the
    multicast rows on the network extended by beta (beta folded in
    linearly), the Hall conditions for emulating the virtual resources and
    R2 = sum alpha - sum beta.
    """
    b = _Builder(Scheme.BLOCK_MARKOV.value, net, ["alpha", "beta"])
    b.nonnegative("alpha")
    b.nonnegative("beta")
    b.rate_sum("alpha", minus="beta")
    b.family_rows("alpha", minus="beta")
    b.public_rows("alpha", minus="beta")
    b.private_rows("alpha", virtual="beta")
    b.cut_rows()
    b.hall_rows("alpha", "beta")
    return b.done()


SYSTEM_BUILDERS = {
    Scheme.PROP1: prop1_system,
    Scheme.THM1: thm1_system,
    Scheme.THM2: thm2_system,
    Scheme.MULTICAST: multicast_system,
    Scheme.RELAXED: relaxed_system,
    Scheme.BLOCK_MARKOV: block_markov_system,
}


def build_system(scheme: Scheme, net: CombinationNetwork) -> LinearSystem:
    return SYSTEM_BUILDERS[Scheme(scheme)](net)
