"""
Decompression search.

A decompression undoes one compression: a pair L_i <= L_j is replaced by
(L_i + X, L_i + Y) for a non-trivial split X + Y of L_j - L_i. Starting from
a saturated multifamily, decompress_to_standard searches for a chain of
saturated decompressions ending at a standard multifamily. For three public
receivers the seven two-element templates below are tried first, in table
order and lexicographic receiver order; a generic search over all saturated
decompressions follows, so the search is complete.

Decompression strictly increases the number of incomparable pairs, which
bounds the depth of the search by the target's edge count.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Callable, Dict, List, Optional, Set, Tuple

from ..errors import CertificateNotFoundError, PreconditionViolatedError
from ..network.model import SetFamily, slot_key
from .multifamily import (
    Ground,
    MultiFamily,
    canonical,
    compress,
    graph_edge_count,
    is_balanced,
    is_saturated,
    pattern,
    restrict,
    stars,
)

logger = logging.getLogger(__name__)

# Each template gives the decompressed pair (C, D) for receivers (i, j, k);
# it applies to an element pair equal to (C & D, C | D).
TEMPLATES: List[Callable[[int, int, int], Tuple[SetFamily, SetFamily]]] = [
    lambda i, j, k: (stars(3, {i}), stars(3, {j})),
    lambda i, j, k: (stars(3, {i}), stars(3, {j, k})),
    lambda i, j, k: (stars(3, {i, j}), stars(3, {i, k})),
    lambda i, j, k: (stars(3, {i, j}), stars(3, {i, k}, {j, k})),
    lambda i, j, k: (stars(3, {i}, {j}), stars(3, {i}, {k})),
    lambda i, j, k: (stars(3, {i}), stars(3, {j}, {k})),
    lambda i, j, k: (stars(3, {i}, {j}), stars(3, {k}, {i, j})),
]


@dataclass(frozen=True)
class CompressionCertificate:
    """
    Replaying ``steps`` (compressions at index pairs) on ``start`` gives ``end``.

    Families are compared inside ``ground`` when it is set.
    """
    m: int
    start: MultiFamily
    steps: Tuple[Tuple[int, int], ...]
    end: MultiFamily
    ground: Ground = None

    def replay(self) -> List[MultiFamily]:
        states = [self.start]
        for i, j in self.steps:
            states.append(compress(states[-1], i, j)[0])
        return states

    def edge_counts(self) -> List[int]:
        return [graph_edge_count(state) for state in self.replay()]

    def verify(self) -> bool:
        """Replay reaches ``end``, every step is non-trivial and edge counts strictly drop."""
        state = self.start
        for i, j in self.steps:
            if not (0 <= i < len(state) and 0 <= j < len(state)) or i == j:
                return False
            after, trivial = compress(state, i, j)
            if trivial or graph_edge_count(after) >= graph_edge_count(state):
                return False
            state = after
        return state == self.end

    def to_dict(self) -> Dict[str, object]:
        return {
            "steps": [list(step) for step in self.steps],
            "edge_counts": self.edge_counts(),
        }


def _splits(difference: SetFamily):
    """Non-trivial bipartitions (X, Y) of a family; the smallest member always lands in X."""
    members = sorted(difference, key=slot_key)
    first, rest = members[0], members[1:]
    for size in range(len(rest)):
        for chosen in combinations(rest, size):
            X = frozenset((first,) + chosen)
            yield X, difference - X


def decompress_elementary(mf: MultiFamily, require_saturated: bool = False, m: Optional[int] = None,
                          ground: Ground = None) -> List[Tuple[MultiFamily, Tuple[int, int]]]:
    """
    Every one-step decompression of ``mf``.

    Returns:
        (predecessor, (i, j)) pairs; compress(predecessor, i, j) gives back mf
        through a non-trivial step
    """
    if require_saturated and m is None:
        raise PreconditionViolatedError("saturated decompression needs the receiver count m")
    found: List[Tuple[MultiFamily, Tuple[int, int]]] = []
    seen: Set[MultiFamily] = set()
    for i in range(len(mf)):
        for j in range(len(mf)):
            if i == j or not mf[i] <= mf[j]:
                continue
            difference = mf[j] - mf[i]
            if len(difference) < 2:
                continue
            for X, Y in _splits(difference):
                A, B = mf[i] | X, mf[i] | Y
                if require_saturated and not (is_saturated(A, m, ground) and is_saturated(B, m, ground)):
                    continue
                out = list(mf)
                out[i], out[j] = A, B
                candidate = tuple(out)
                if candidate not in seen:
                    seen.add(candidate)
                    found.append((candidate, (i, j)))
    return found


def _template_moves(mf: MultiFamily, ground: Ground) -> List[Tuple[MultiFamily, Tuple[int, int]]]:
    moves = []
    for template in TEMPLATES:
        for i, j, k in permutations((1, 2, 3)):
            C, D = restrict(template(i, j, k), ground)
            low, high = C & D, C | D
            if C == low or D == low:
                continue
            for a in range(len(mf)):
                if mf[a] != low:
                    continue
                for b in range(len(mf)):
                    if b != a and mf[b] == high:
                        out = list(mf)
                        out[a], out[b] = C, D
                        moves.append((tuple(out), (a, b)))
    return moves


def decompress_to_standard(lam: MultiFamily, gamma: MultiFamily, m: int,
                           ground: Ground = None) -> CompressionCertificate:
    """
    Certificate that ``gamma`` compresses to ``lam``.

    Args:
        lam: Saturated multifamily
        gamma: Standard multifamily balanced with lam
        ground: Optional set of subsets both are restricted to

    Returns:
        CompressionCertificate starting at a reordering of gamma (padded with
        empty families) and ending at lam padded to the same length
    """
    if m not in (2, 3):
        raise PreconditionViolatedError(f"decompression to a standard pattern is supported for m in (2, 3), got {m}")
    lam, gamma = restrict(lam, ground), restrict(gamma, ground)
    if not pattern(lam, m, ground).saturated:
        raise PreconditionViolatedError("lam is not saturated")
    if not pattern(gamma, m, ground).standard:
        raise PreconditionViolatedError("gamma is not standard")
    if not is_balanced(lam, gamma):
        raise PreconditionViolatedError("lam and gamma are not balanced")

    nonempty = [F for F in lam if F]
    size = max(len(gamma), len(nonempty))
    if len(nonempty) > len([F for F in gamma if F]):
        raise CertificateNotFoundError("lam has more non-empty elements than gamma")
    start = tuple(nonempty) + (frozenset(),) * (size - len(nonempty))
    target = canonical(gamma)
    limit = graph_edge_count(tuple(gamma))

    visited: Set[Tuple] = set()
    path: List[Tuple[int, int]] = []

    def search(state: MultiFamily) -> Optional[MultiFamily]:
        key = canonical(state)
        if key == target:
            return state
        if key in visited:
            return None
        visited.add(key)
        moves = _template_moves(state, ground) if m == 3 else []
        moves += decompress_elementary(state, require_saturated=True, m=m, ground=ground)
        for candidate, step in moves:
            edges = graph_edge_count(candidate)
            if edges > limit or (edges == limit and canonical(candidate) != target):
                continue
            path.append(step)
            final = search(candidate)
            if final is not None:
                return final
            path.pop()
        return None

    final = search(start)
    if final is None:
        raise CertificateNotFoundError("no saturated decompression chain reaches the standard multifamily")
    certificate = CompressionCertificate(m, final, tuple(reversed(path)), start, ground)
    logger.debug("Decompression chain of %d steps, edge counts %s", len(path), certificate.edge_counts())
    return certificate
