"""
Multisets of set families.

A MultiFamily is an ordered tuple of families of subsets of {1..m}.
Elementary compression replaces two elements by their intersection and
union; it keeps every subset's total multiplicity and never increases the
number of incomparable element pairs.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional, Tuple

from ..errors import IndexOutOfRangeError
from ..network.families import family_key
from ..network.model import SetFamily, Subset, power_set, up_closure

logger = logging.getLogger(__name__)

MultiFamily = Tuple[SetFamily, ...]
Ground = Optional[SetFamily]


def family(*members: Iterable[int]) -> SetFamily:
    """family({1}, {2, 3}) -> frozenset of frozensets."""
    return frozenset(frozenset(S) for S in members)


def multifamily(families: Iterable[Iterable[Iterable[int]]]) -> MultiFamily:
    return tuple(frozenset(frozenset(S) for S in F) for F in families)


def star(S: Iterable[int], m: int) -> SetFamily:
    """{S*}, every subset of {1..m} containing S."""
    return up_closure(S, m)


def stars(m: int, *bases: Iterable[int]) -> SetFamily:
    """Union of {S*} over the given bases."""
    out: frozenset = frozenset()
    for S in bases:
        out |= up_closure(S, m)
    return out


def restrict(mf: MultiFamily, ground: Ground) -> MultiFamily:
    if ground is None:
        return tuple(mf)
    return tuple(F & ground for F in mf)


def canonical(mf: MultiFamily) -> Tuple:
    """Order-free identity of a multifamily, ignoring empty elements."""
    return tuple(sorted(family_key(F) for F in mf if F))


def compress(mf: MultiFamily, i: int, j: int) -> Tuple[MultiFamily, bool]:
    """
    Elementary compression of elements i and j.

    Returns:
        (result, trivial) with the intersection at position i, the union at
        position j; trivial when one element contains the other
    """
    if i == j or not (0 <= i < len(mf) and 0 <= j < len(mf)):
        raise IndexOutOfRangeError(f"cannot compress positions ({i}, {j}) of a {len(mf)}-element multifamily",
                                   i=i, j=j, size=len(mf))
    a, b = mf[i], mf[j]
    out = list(mf)
    out[i] = a & b
    out[j] = a | b
    return tuple(out), a <= b or b <= a


def counts(mf: MultiFamily, ground: Ground = None) -> Counter:
    total: Counter = Counter()
    for F in restrict(mf, ground):
        total.update(F)
    return total


def is_balanced(A: MultiFamily, B: MultiFamily, ground: Ground = None) -> bool:
    """Every subset occurs equally often in A and in B."""
    return counts(A, ground) == counts(B, ground)


@dataclass(frozen=True)
class Pattern:
    saturated: bool
    standard: bool


def is_saturated(F: SetFamily, m: int, ground: Ground = None) -> bool:
    universe = power_set(m) if ground is None else list(ground)
    return all(T in F for S in F for T in universe if S <= T)


def pattern(mf: MultiFamily, m: int, ground: Ground = None) -> Pattern:
    """
    Saturated: every element up-closed. Standard: every element is {S : S contains i}
    for some public receiver i. Both are judged inside the ground set when one is given.
    """
    mf = restrict(mf, ground)
    standards = [stars(m, {i}) if ground is None else stars(m, {i}) & ground for i in range(1, m + 1)]
    return Pattern(
        saturated=all(is_saturated(F, m, ground) for F in mf),
        standard=all(F in standards for F in mf),
    )


def graph_edge_count(mf: MultiFamily) -> int:
    """Pairs of elements where neither contains the other."""
    return sum(1 for a, b in combinations(mf, 2) if not (a <= b or b <= a))
