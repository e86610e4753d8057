"""
Block-Markov planning.

A rate pair of the gamma region is realized by adding beta_S virtual
resources per group S, running a multicast code of split alpha on the
extended network and emulating every virtual resource with a message slot
of the next block. The slot of a virtual resource in group S must belong to
some W2^T with T containing S, so every end-destination of the resource
decodes it.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Dict, List, Mapping, Optional, Tuple

import networkx as nx
from networkx.algorithms.flow import edmonds_karp

from ..codes.code import ZeroStructuredCode
from ..codes.synthesis import build_zs
from ..errors import HallViolatedError, InfeasibleRatePairError, MalformedArgumentError, PlanNotFoundError
from ..field.gf import choose_field
from ..network.families import saturated_families
from ..network.model import (
    CombinationNetwork,
    SetFamily,
    Subset,
    extend_network,
    format_subset,
    scale_network,
    slot_key,
    subset_key,
)
from ..regions.feasibility import FarkasCertificate, feasible, integer_feasible, integer_optimize
from ..regions.systems import (
    R1 as R1_VAR,
    R2 as R2_VAR,
    Relation,
    RateSplit,
    block_markov_system,
    family_label,
    multicast_system,
    split_name,
    thm2_system,
    to_fraction,
)

logger = logging.getLogger(__name__)

VirtualResource = Tuple[Subset, int]

FLUSH_POLICIES = ("auto", "per-symbol")


@dataclass(frozen=True)
class Slot:
    """Symbol ``index`` of the sub-message W2^T."""
    subset: Subset
    index: int

    def sort_key(self):
        return slot_key(self.subset), self.index

    def __str__(self) -> str:
        return f"W2{format_subset(self.subset)}[{self.index}]"


def _slots(alpha: Mapping[Subset, int]) -> List[Slot]:
    slots = [Slot(frozenset(T), k) for T, count in alpha.items() for k in range(int(count))]
    return sorted(slots, key=Slot.sort_key)


def _virtual_resources(beta: Mapping[Subset, int]) -> List[VirtualResource]:
    return [(frozenset(S), k) for S in sorted(beta, key=subset_key) for k in range(int(beta[S]))]


def hall_violation(alpha: Mapping[Subset, int], beta: Mapping[Subset, int], m: int) -> Optional[SetFamily]:
    """First saturated family L of subsets of {1..m} (by size) with sum_L beta > sum_L alpha, or None."""
    for family in saturated_families(m):
        if not family:
            continue
        if sum(beta.get(S, 0) for S in family) > sum(alpha.get(S, 0) for S in family):
            return family
    return None


def _matching_size(virtuals: List[VirtualResource], slots: List[Slot]) -> int:
    graph = nx.DiGraph()
    graph.add_node("source")
    graph.add_node("sink")
    for v in virtuals:
        graph.add_edge("source", ("v", v), capacity=1)
        for slot in slots:
            if v[0] <= slot.subset:
                graph.add_edge(("v", v), ("slot", slot), capacity=1)
    for slot in slots:
        graph.add_edge(("slot", slot), "sink", capacity=1)
    return int(nx.maximum_flow_value(graph, "source", "sink", flow_func=edmonds_karp))


def emulation_assignment(alpha: Mapping[Subset, int], beta: Mapping[Subset, int],
                         m: int) -> Dict[VirtualResource, Slot]:
    """
    Injective map from virtual resources to message slots.

    Virtual resources are taken in split-variable order and each one gets the
    smallest slot (by |T|, T, index) that still leaves a perfect matching for
    the rest, so the result is the lexicographically first assignment.

    Raises:
        HallViolatedError: naming a saturated family that has more virtual
            resources than slots
    """
    virtuals = _virtual_resources(beta)
    slots = _slots(alpha)
    if _matching_size(virtuals, slots) < len(virtuals):
        family = hall_violation(alpha, beta, m)
        label = family_label(family) if family is not None else "unknown"
        raise HallViolatedError(f"virtual resources cannot be emulated; Hall condition fails on {label}",
                                family=family, violated=label)

    assignment: Dict[VirtualResource, Slot] = {}
    free = list(slots)
    for position, v in enumerate(virtuals):
        rest = virtuals[position + 1:]
        for slot in free:
            if not v[0] <= slot.subset:
                continue
            remaining = [s for s in free if s != slot]
            if _matching_size(rest, remaining) == len(rest):
                assignment[v] = slot
                free = remaining
                break
    logger.debug("Emulation: %s", {f"{format_subset(S)}#{k}": str(s) for (S, k), s in assignment.items()})
    return assignment


# ============================================================================
# Plans
# ============================================================================

@dataclass(frozen=True, eq=False)
class FlushPlan:
    """
    How the last block delivers the virtual symbols of block n-1.

    Either one multicast code of rate (0, sum beta) whose slots take the
    deferred symbols, or one part per virtual symbol with a rate-one code for
    its group. ``blocks`` counts the network uses the flush takes.
    """
    codes: Dict[Subset, ZeroStructuredCode] = field(default_factory=dict)
    assignment: Dict[VirtualResource, Slot] = field(default_factory=dict)
    blocks: int = 1
    per_symbol: bool = False


@dataclass(frozen=True, eq=False)
class BlockMarkovPlan:
    """Everything the simulator needs; rates are per use of the scaled network."""
    net: CombinationNetwork
    scale: int
    R1: int
    R2: int
    alpha: Dict[Subset, int]
    beta: Dict[Subset, int]
    extended: CombinationNetwork
    mcode: ZeroStructuredCode
    emulation: Dict[VirtualResource, Slot]
    flush: FlushPlan
    rates: Tuple[Fraction, Fraction] = (Fraction(0), Fraction(0))

    @property
    def q(self) -> int:
        return self.mcode.q

    @property
    def multicast_rate(self) -> int:
        """R2' = sum alpha, the private symbols per data block of the multicast code."""
        return sum(self.alpha.values())

    @property
    def virtual_count(self) -> int:
        return sum(self.beta.values())

    @property
    def virtual_rows(self) -> Dict[VirtualResource, int]:
        """Extended-network row of each virtual resource."""
        rows = self.extended.virtual_rows()
        return dict(zip(_virtual_resources(self.beta), rows))

    def slot_position(self, slot: Slot) -> int:
        """Index of a slot inside the multicast code's W2 vector."""
        return self.mcode.layout.columns(slot.subset)[slot.index] - self.R1

    def to_dict(self) -> Dict[str, object]:
        return {
            "rates": [str(r) for r in self.rates],
            "scale": self.scale,
            "alpha": RateSplit.of(self.alpha).describe("alpha"),
            "beta": RateSplit.of(self.beta).describe("beta"),
            "q": self.q,
            "emulation": {f"{format_subset(S)}#{k}": str(slot) for (S, k), slot in self.emulation.items()},
            "flush_blocks": self.flush.blocks,
            "flush_per_symbol": self.flush.per_symbol,
        }


def _lcm_denominator(values) -> int:
    return reduce(lambda acc, v: acc * v.denominator // math.gcd(acc, v.denominator), values, 1)


def _integer_split(net: CombinationNetwork, R1: int, R2: int,
                   alpha: Dict[Subset, Fraction], beta: Dict[Subset, Fraction]):
    """Minimize sum beta over integral (alpha, beta), starting from the witness-derived candidate."""
    sys = block_markov_system(net)
    alphas = sys.split_variables("alpha")
    betas = sys.split_variables("beta")
    incumbent = {R1_VAR: Fraction(R1), R2_VAR: Fraction(R2)}
    for name in alphas:
        incumbent[name] = alpha.get(sys.groups[name], Fraction(0))
    for name in betas:
        incumbent[name] = beta.get(sys.groups[name], Fraction(0))
    if any(v.denominator != 1 for v in incumbent.values()):
        incumbent = None
    elif sys.violated(incumbent):
        logger.warning("Witness-derived split violates the block-Markov rows; searching without it")
        incumbent = None
    best = integer_optimize(sys, {name: 1 for name in betas}, alphas + betas,
                            fixed={R1_VAR: R1, R2_VAR: R2}, incumbent=incumbent)
    if best is None:
        raise PlanNotFoundError(f"no integral virtual-resource split found at ({R1}, {R2})")
    values = best.values
    return ({sys.groups[n]: int(values[n]) for n in alphas if values[n]},
            {sys.groups[n]: int(values[n]) for n in betas if values[n]})


def _flush_plan(net: CombinationNetwork, beta: Dict[Subset, int], q: int, seed: Optional[int],
                policy: str = "auto") -> FlushPlan:
    total = sum(beta.values())
    if not total:
        return FlushPlan()
    sys = multicast_system(net)
    found = None
    if policy == "auto":
        hall = []
        for family in saturated_families(net.m):
            need = sum(beta.get(S, 0) for S in family)
            if family and need:
                hall.append(sys.row({split_name("alpha", S): 1 for S in family}, Relation.GE, need,
                                    f"flush[{family_label(family)}]"))
        found = integer_feasible(sys.with_constraints(hall), sys.split_variables("alpha"),
                                 fixed={R1_VAR: 0, R2_VAR: total})
    if found is not None:
        alpha_f = {sys.groups[n]: int(found[n]) for n in sys.split_variables("alpha") if found[n]}
        code = build_zs(net, alpha_f, 0, total, seed=seed, q=q, multicast=True)
        return FlushPlan({frozenset(): code}, emulation_assignment(alpha_f, beta, net.m), 1, False)

    if policy == "auto":
        logger.info("No single-block flush code; sending one virtual symbol per flush block")
    codes: Dict[Subset, ZeroStructuredCode] = {}
    for S in beta:
        if isinstance(feasible(multicast_system(net), 0, 1, {split_name("alpha", T): int(T == S)
                                                             for T in sys.groups.values()}), FarkasCertificate):
            raise PlanNotFoundError(f"a virtual symbol of group {format_subset(S)} cannot be flushed at rate one")
        codes[S] = build_zs(net, {S: 1}, 0, 1, seed=seed, q=q, multicast=True)
    assignment = {v: Slot(v[0], 0) for v in _virtual_resources(beta)}
    return FlushPlan(codes, assignment, total, True)


def plan(net: CombinationNetwork, R1, R2, seed: Optional[int] = None, q: Optional[int] = None,
         flush_policy: str = "auto") -> BlockMarkovPlan:
    """
    Virtual resources, multicast code and emulation for a rate pair of the gamma region.

    Args:
        flush_policy: "auto" (one multicast flush block when a code exists) or
            "per-symbol" (one flush part per virtual symbol)

    Raises:
        InfeasibleRatePairError: the pair lies outside the block-Markov region
    """
    if flush_policy not in FLUSH_POLICIES:
        raise MalformedArgumentError(f"unknown flush policy {flush_policy!r}")
    R1, R2 = to_fraction(R1), to_fraction(R2)
    sys = thm2_system(net)
    result = feasible(sys, R1, R2)
    if isinstance(result, FarkasCertificate):
        raise InfeasibleRatePairError(f"({R1}, {R2}) is outside the block-Markov region",
                                      rows=", ".join(label for label, _ in result.rows(sys)))
    gamma = result.split(sys, "gamma")
    beta0 = {S: max(-v, Fraction(0)) for S, v in gamma.items()}
    alpha0 = {S: v + beta0[S] for S, v in gamma.items()}
    witness_scale = _lcm_denominator([R1, R2] + list(alpha0.values()) + list(beta0.values()))

    # Integral rates first try a split on the unscaled network
    scales = [witness_scale]
    if witness_scale > 1 and R1.denominator == 1 and R2.denominator == 1:
        scales.insert(0, 1)
    for scale in scales:
        scaled = scale_network(net, scale) if scale > 1 else net
        r1, r2 = int(R1 * scale), int(R2 * scale)
        try:
            alpha, beta = _integer_split(scaled, r1, r2,
                                         {S: v * scale for S, v in alpha0.items()},
                                         {S: v * scale for S, v in beta0.items()})
            break
        except PlanNotFoundError:
            if scale == scales[-1]:
                raise
            logger.info("No integral split at scale %d; using the witness denominators", scale)
    logger.info("Plan at (%s, %s): scale %d, %s, %s", R1, R2, scale,
                RateSplit.of(alpha).describe("alpha"), RateSplit.of(beta).describe("beta"))

    q = q or choose_field(net.K)
    extended = extend_network(scaled, beta)
    mcode = build_zs(extended, alpha, r1, sum(alpha.values()), seed=seed, q=q, multicast=True)
    emulation = emulation_assignment(alpha, beta, net.m)
    flush = _flush_plan(scaled, beta, q, seed, flush_policy)
    return BlockMarkovPlan(net=scaled, scale=scale, R1=r1, R2=r2, alpha=alpha, beta=beta,
                           extended=extended, mcode=mcode, emulation=emulation, flush=flush,
                           rates=(R1, R2))
