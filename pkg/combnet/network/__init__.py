"""
Combination network package.

Data model, saturated families and the equivalent unicast network.
"""

from .model import (
    Subset,
    SetFamily,
    MAX_PUBLIC_RECEIVERS,
    EMPTY,
    Resource,
    CombinationNetwork,
    subset_key,
    slot_key,
    power_set,
    up_closure,
    is_up_closed,
    format_subset,
    check_size,
    load_network,
    read_network,
    dump_network,
    group_counts,
    receiver_mincut,
    extend_network,
    scale_network,
)

from .families import (
    saturated_families,
    families_within,
    family_key,
)

from .unicast import (
    GroupProfile,
    build_unicast_network,
    unicast_max_flow,
    zero_struct_mincut,
    full_rank_feasible,
    load_profile,
)

__all__ = [
    # Model
    "Subset",
    "SetFamily",
    "MAX_PUBLIC_RECEIVERS",
    "EMPTY",
    "Resource",
    "CombinationNetwork",
    "subset_key",
    "slot_key",
    "power_set",
    "up_closure",
    "is_up_closed",
    "format_subset",
    "check_size",
    "load_network",
    "read_network",
    "dump_network",
    "group_counts",
    "receiver_mincut",
    "extend_network",
    "scale_network",

    # Families
    "saturated_families",
    "families_within",
    "family_key",

    # Unicast network
    "GroupProfile",
    "build_unicast_network",
    "unicast_max_flow",
    "zero_struct_mincut",
    "full_rank_feasible",
    "load_profile",
]
