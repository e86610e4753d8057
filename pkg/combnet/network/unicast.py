"""
Equivalent unicast network of a zero-structured matrix.

A zero-structured matrix with c_S columns and r_S rows per group S has full
column rank for some assignment exactly when the four-layer unicast network
built here carries c units of flow. The min-cut over saturated families is
the closed form of that flow.
"""

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Mapping, Union

import networkx as nx
from networkx.algorithms.flow import edmonds_karp

from ..errors import MalformedDocumentError, PreconditionViolatedError, ReceiverIndexError
from .families import saturated_families
from .model import Subset, check_size, power_set

logger = logging.getLogger(__name__)

SOURCE = "A"
SINK = "B"


@dataclass(frozen=True)
class GroupProfile:
    """Per-group column counts c_S and row counts r_S (missing groups are zero)."""
    c: Mapping[Subset, int] = field(default_factory=dict)
    r: Mapping[Subset, int] = field(default_factory=dict)

    def cols(self, S: Subset) -> int:
        return self.c.get(S, 0)

    def rows(self, S: Subset) -> int:
        return self.r.get(S, 0)

    @property
    def total_cols(self) -> int:
        return sum(self.c.values())


def build_unicast_network(profile: GroupProfile, m: int) -> nx.DiGraph:
    """
    Four-layer network A -> n_S -> n'_S' -> B.

    A feeds n_S with capacity c_S, n'_S feeds B with capacity r_S, and
    n_S -> n'_S' exists for every S' contained in S with capacity
    sum(c) + 1 standing in for infinity.
    """
    check_size(m)
    infinite = profile.total_cols + 1
    graph = nx.DiGraph()
    graph.add_node(SOURCE)
    graph.add_node(SINK)
    groups = power_set(m)
    for S in groups:
        graph.add_edge(SOURCE, ("n", S), capacity=profile.cols(S))
        graph.add_edge(("n'", S), SINK, capacity=profile.rows(S))
    for S in groups:
        for inner in groups:
            if inner <= S:
                graph.add_edge(("n", S), ("n'", inner), capacity=infinite)
    return graph


def unicast_max_flow(profile: GroupProfile, m: int) -> int:
    graph = build_unicast_network(profile, m)
    return int(nx.maximum_flow_value(graph, SOURCE, SINK, flow_func=edmonds_karp))


def zero_struct_mincut(profile: GroupProfile, m: int) -> int:
    """min over saturated L of sum_{S in L} c_S + sum_{S not in L} r_S."""
    check_size(m)
    groups = power_set(m)
    best = None
    for family in saturated_families(m):
        value = sum(profile.cols(S) if S in family else profile.rows(S) for S in groups)
        if best is None or value < best:
            best = value
    return best


def full_rank_feasible(profile: GroupProfile, m: int, c: int) -> bool:
    """Whether some assignment of the indeterminates gives full column rank c."""
    if c != profile.total_cols:
        raise PreconditionViolatedError(f"c={c} differs from the profile's column total {profile.total_cols}")
    return zero_struct_mincut(profile, m) >= c




def _parse_group(label: str, m: int) -> Subset:
    text = label.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise MalformedDocumentError(f"group label must look like {{1,2}} or {{}}, got {label!r}")
    body = text[1:-1].strip()
    try:
        members = frozenset(int(v) for v in body.split(",")) if body else frozenset()
    except ValueError as exc:
        raise MalformedDocumentError(f"group label {label!r} has a non-integer member") from exc
    outside = sorted(i for i in members if not 1 <= i <= m)
    if outside:
        raise ReceiverIndexError(f"group {label} names receivers {outside} outside 1..{m}")
    return members


def _group_counts(raw: Any, what: str, m: int) -> Dict[Subset, int]:
    if not isinstance(raw, Mapping):
        raise MalformedDocumentError(f"{what} must map group labels to counts")
    counts: Dict[Subset, int] = {}
    for label, value in raw.items():
        if isinstance(value, bool) or not isinstance(value, int) or value < 0:
            raise MalformedDocumentError(f"{what}[{label}] must be a non-negative integer, got {value!r}")
        S = _parse_group(label, m)
        counts[S] = counts.get(S, 0) + value
    return counts


def load_profile(document: Union[Mapping[str, Any], str], m: int) -> GroupProfile:
    """
    Validate a group profile document.

    Args:
        document: {"columns": {"{1,2}": 2, ...}, "rows": {"{1}": 1, ...}} or its JSON text
        m: Public receiver count the group labels refer to
    """
    check_size(m)
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise MalformedDocumentError(f"profile document is not valid JSON: {exc}") from exc
    if not isinstance(document, Mapping):
        raise MalformedDocumentError("profile document must be an object")
    profile = GroupProfile(c=_group_counts(document.get("columns", {}), "columns", m),
                           r=_group_counts(document.get("rows", {}), "rows", m))
    logger.debug("Loaded profile with %d columns and %d rows", profile.total_cols, sum(profile.r.values()))
    return profile
