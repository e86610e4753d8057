"""
Combination Network Model

A combination network has a source, d unit-capacity resources and K
receivers. Receivers 1..m are public (they want the common message W1 only),
receivers m+1..K are private (they want W1 and the private message W2).
Each resource is described by the public receivers it reaches (its group S)
and the private receivers it reaches.
"""

import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Tuple, Union

from ..errors import MalformedDocumentError, ReceiverIndexError, UnsupportedSizeError

logger = logging.getLogger(__name__)

Subset = FrozenSet[int]
SetFamily = FrozenSet[Subset]

MAX_PUBLIC_RECEIVERS = 4
EMPTY: Subset = frozenset()


# ============================================================================
# Subset helpers
# ============================================================================

def subset_key(S: Iterable[int]) -> Tuple[int, Tuple[int, ...]]:
    """Decreasing size, lexicographic within a size (the split-variable order)."""
    items = tuple(sorted(S))
    return (-len(items), items)


def slot_key(S: Iterable[int]) -> Tuple[int, Tuple[int, ...]]:
    """Increasing size, lexicographic within a size."""
    items = tuple(sorted(S))
    return (len(items), items)


def power_set(m: int) -> List[Subset]:
    """All subsets of {1..m} in split-variable order (empty set last)."""
    ground = range(1, m + 1)
    subsets = [frozenset(c) for size in range(m + 1) for c in combinations(ground, size)]
    return sorted(subsets, key=subset_key)


def up_closure(S: Iterable[int], m: int) -> SetFamily:
    """{S*}: every subset of {1..m} containing S."""
    base = frozenset(S)
    return frozenset(T for T in power_set(m) if base <= T)


def is_up_closed(family: Iterable[Subset], m: int) -> bool:
    members = set(family)
    for S in members:
        for i in range(1, m + 1):
            if i not in S and (S | {i}) not in members:
                return False
    return True


def format_subset(S: Iterable[int]) -> str:
    return "{" + ",".join(str(i) for i in sorted(S)) + "}"


def check_size(m: int) -> None:
    """Reject networks whose enumeration-based operations would not be desk scale."""
    if m > MAX_PUBLIC_RECEIVERS:
        raise UnsupportedSizeError(
            f"{m} public receivers exceeds the supported maximum of {MAX_PUBLIC_RECEIVERS}", m=m
        )


# ============================================================================
# Data types
# ============================================================================

@dataclass(frozen=True)
class Resource:
    """One unit-capacity edge out of the source."""
    public: Subset
    privates: Subset
    virtual: bool = False

    def reaches(self, receiver: int) -> bool:
        return receiver in self.public or receiver in self.privates


@dataclass(frozen=True)
class CombinationNetwork:
    """Receivers 1..m public, m+1..K private; resources in a fixed order."""
    m: int
    K: int
    resources: Tuple[Resource, ...] = field(default_factory=tuple)

    @property
    def d(self) -> int:
        return len(self.resources)

    @property
    def public_receivers(self) -> List[int]:
        return list(range(1, self.m + 1))

    @property
    def private_receivers(self) -> List[int]:
        return list(range(self.m + 1, self.K + 1))

    @property
    def receivers(self) -> List[int]:
        return list(range(1, self.K + 1))

    def is_public(self, receiver: int) -> bool:
        return 1 <= receiver <= self.m

    def rows_reaching(self, receiver: int) -> List[int]:
        """Indices of the resources a receiver observes."""
        return [e for e, res in enumerate(self.resources) if res.reaches(receiver)]

    def real_rows(self) -> List[int]:
        return [e for e, res in enumerate(self.resources) if not res.virtual]

    def virtual_rows(self) -> List[int]:
        return [e for e, res in enumerate(self.resources) if res.virtual]


# ============================================================================
# Loading and dumping
# ============================================================================

def _int_list(value: Any, what: str) -> List[int]:
    if not isinstance(value, list) or any(isinstance(v, bool) or not isinstance(v, int) for v in value):
        raise MalformedDocumentError(f"{what} must be a list of integers, got {value!r}")
    return value


def load_network(document: Union[Mapping[str, Any], str]) -> CombinationNetwork:
    """
    Validate a network description document.

    Args:
        document: Parsed mapping or its JSON text

    Returns:
        CombinationNetwork with canonical receiver indices
    """
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise MalformedDocumentError(f"network document is not valid JSON: {exc}") from exc
    if not isinstance(document, Mapping):
        raise MalformedDocumentError("network document must be an object")

    try:
        m = document["public_receivers"]
        private_count = document["private_receivers"]
        raw_resources = document["resources"]
    except KeyError as exc:
        raise MalformedDocumentError(f"network document is missing field {exc}") from exc

    for name, value in (("public_receivers", m), ("private_receivers", private_count)):
        if isinstance(value, bool) or not isinstance(value, int) or value < 0:
            raise MalformedDocumentError(f"{name} must be a non-negative integer, got {value!r}")
    K = m + private_count
    if K < 1:
        raise MalformedDocumentError("a network needs at least one receiver")
    if not isinstance(raw_resources, list) or not raw_resources:
        raise MalformedDocumentError("resources must be a non-empty list")

    resources = []
    for position, raw in enumerate(raw_resources):
        if not isinstance(raw, Mapping) or "public" not in raw:
            raise MalformedDocumentError(f"resource {position} must be an object with a 'public' list")
        public = _int_list(raw["public"], f"resource {position} public")
        privates = _int_list(raw.get("privates", []), f"resource {position} privates")
        for i in public:
            if not 1 <= i <= m:
                raise ReceiverIndexError(f"resource {position}: public receiver {i} outside 1..{m}")
        for p in privates:
            if not m < p <= K:
                raise ReceiverIndexError(f"resource {position}: private receiver {p} outside {m + 1}..{K}")
        resources.append(Resource(frozenset(public), frozenset(privates), bool(raw.get("virtual", False))))

    net = CombinationNetwork(m=m, K=K, resources=tuple(resources))
    logger.debug("Loaded network m=%d K=%d d=%d", m, K, net.d)
    return net


def read_network(path: Union[str, Path]) -> CombinationNetwork:
    """Load a network description from a file."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MalformedDocumentError(f"cannot read network file {path}: {exc}") from exc
    return load_network(text)


def dump_network(net: CombinationNetwork) -> Dict[str, Any]:
    """Inverse of load_network."""
    resources = []
    for res in net.resources:
        entry: Dict[str, Any] = {"public": sorted(res.public), "privates": sorted(res.privates)}
        if res.virtual:
            entry["virtual"] = True
        resources.append(entry)
    return {"public_receivers": net.m, "private_receivers": net.K - net.m, "resources": resources}


# ============================================================================
# Group counts and network transformations
# ============================================================================

def group_counts(net: CombinationNetwork) -> Tuple[Counter, Counter]:
    """
    Resource group sizes.

    Returns:
        (E, Ep) where E[S] counts resources whose public set is exactly S and
        Ep[(S, p)] counts those that also reach private receiver p. Missing
        keys read as zero.
    """
    E: Counter = Counter()
    Ep: Counter = Counter()
    for res in net.resources:
        E[res.public] += 1
        for p in res.privates:
            Ep[(res.public, p)] += 1
    return E, Ep


def receiver_mincut(net: CombinationNetwork, receiver: int) -> int:
    """Min-cut from the source to one receiver: the resources reaching it."""
    if not 1 <= receiver <= net.K:
        raise ReceiverIndexError(f"receiver {receiver} outside 1..{net.K}")
    return len(net.rows_reaching(receiver))


def extend_network(net: CombinationNetwork, beta: Mapping[Subset, int]) -> CombinationNetwork:
    """
    Add beta[S] virtual resources with public set S reaching every private receiver.

    Virtual resources are appended after the real ones, groups in
    split-variable order.
    """
    everyone = frozenset(net.private_receivers)
    added = []
    for S in sorted(beta, key=subset_key):
        count = beta[S]
        if count < 0:
            raise MalformedDocumentError(f"virtual resource count for {format_subset(S)} is negative")
        if not frozenset(S) <= frozenset(net.public_receivers):
            raise ReceiverIndexError(f"virtual group {format_subset(S)} is not a subset of 1..{net.m}")
        added.extend(Resource(frozenset(S), everyone, virtual=True) for _ in range(count))
    if added:
        logger.debug("Extended network with %d virtual resources", len(added))
    return CombinationNetwork(m=net.m, K=net.K, resources=net.resources + tuple(added))


def scale_network(net: CombinationNetwork, n: int) -> CombinationNetwork:
    """n channel uses per block: every resource repeated n times in place."""
    if n < 1:
        raise MalformedDocumentError(f"scale factor must be positive, got {n}")
    return CombinationNetwork(
        m=net.m, K=net.K, resources=tuple(res for res in net.resources for _ in range(n))
    )
