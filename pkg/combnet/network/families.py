"""
Superset-saturated families.

A family of subsets of {1..m} is saturated when it is up-closed. They index
the cut constraints of every rate region, so they are enumerated once per m
and cached.
"""

from functools import lru_cache
from typing import List, Tuple

from .model import SetFamily, Subset, check_size, power_set, slot_key


def family_key(family: SetFamily):
    return (len(family), tuple(sorted(slot_key(S) for S in family)))


@lru_cache(maxsize=None)
def _enumerate(m: int) -> Tuple[SetFamily, ...]:
    # Supersets come first in split-variable order, so a subset may join
    # only once all of its one-element extensions are already members.
    order = power_set(m)
    found: List[SetFamily] = []

    def extend(position: int, chosen: frozenset) -> None:
        if position == len(order):
            found.append(chosen)
            return
        S = order[position]
        extend(position + 1, chosen)
        if all((S | {i}) in chosen for i in range(1, m + 1) if i not in S):
            extend(position + 1, chosen | {S})

    extend(0, frozenset())
    return tuple(sorted(found, key=family_key))


def saturated_families(m: int) -> List[SetFamily]:
    """
    Every up-closed family of subsets of {1..m}.

    Includes the empty family and the full power set; ordered by size, then
    by member sets.
    """
    check_size(m)
    return list(_enumerate(m))


def families_within(ground: SetFamily, m: int) -> List[SetFamily]:
    """Saturated families contained in ``ground``."""
    return [family for family in saturated_families(m) if family <= ground]


def complement(family: SetFamily, m: int) -> List[Subset]:
    return [S for S in power_set(m) if S not in family]
