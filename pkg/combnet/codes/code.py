"""
Zero-structured codes.

A code is an encoding matrix A over F_q whose columns are laid out as the
common message W1 followed by one block per private sub-message W2^S
(decreasing |S|, lexicographic within a size, W2^phi last). Row e may carry
block S only when the public receivers of resource e are a subset of S;
the W1 columns are unrestricted.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np

from ..errors import MalformedArgumentError
from ..field.gf import field as gf_field
from ..network.model import EMPTY, CombinationNetwork, Subset, format_subset, power_set

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ColumnLayout:
    """Column positions of W1 and of every W2^S block."""
    R1: int
    blocks: Tuple[Tuple[Subset, int, int], ...]

    @classmethod
    def from_split(cls, m: int, R1: int, split: Mapping[Subset, int]) -> "ColumnLayout":
        """Blocks take alpha_S columns; a negative alpha_phi contributes none."""
        blocks = []
        start = R1
        for S in power_set(m):
            width = max(int(split.get(S, 0)), 0)
            blocks.append((S, start, width))
            start += width
        return cls(R1, tuple(blocks))

    @property
    def width(self) -> int:
        return self.R1 + sum(width for _, _, width in self.blocks)

    @property
    def w1_columns(self) -> List[int]:
        return list(range(self.R1))

    def columns(self, S: Subset) -> List[int]:
        for T, start, width in self.blocks:
            if T == S:
                return list(range(start, start + width))
        return []

    def visible_columns(self, receiver: int) -> List[int]:
        """Private-message columns of every block a public receiver is allowed to see."""
        return [j for S, start, width in self.blocks if receiver in S for j in range(start, start + width)]

    def block_of(self, column: int) -> Optional[Subset]:
        for S, start, width in self.blocks:
            if start <= column < start + width:
                return S
        return None

    def mask(self, net: CombinationNetwork) -> np.ndarray:
        allowed = np.zeros((net.d, self.width), dtype=bool)
        allowed[:, :self.R1] = True
        for e, res in enumerate(net.resources):
            for S, start, width in self.blocks:
                if res.public <= S:
                    allowed[e, start:start + width] = True
        return allowed


@dataclass(frozen=True, eq=False)
class ZeroStructuredCode:
    """
    Encoding matrix plus everything the decoders need.

    With a pre-encoder P the private message W2 is first mapped to the
    pseudo-message P @ W2 of length R2 + |alpha_phi|, which then occupies the
    non-phi blocks.
    """
    net: CombinationNetwork
    q: int
    R1: int
    R2: int
    split: Mapping[Subset, int]
    A: np.ndarray
    mask: np.ndarray
    pre_encoder: Optional[np.ndarray] = None
    multicast: bool = False
    resource_order: Tuple[int, ...] = ()
    _decoders: Dict[Tuple[str, int], object] = field(default_factory=dict, repr=False)

    @property
    def layout(self) -> ColumnLayout:
        return ColumnLayout.from_split(self.net.m, self.R1, self.split)

    @property
    def d(self) -> int:
        return self.A.shape[0]

    @property
    def effective(self):
        """d x (R1 + R2) map from (W1, W2) to the transmitted symbols."""
        if self.pre_encoder is None:
            return self.A
        GF = gf_field(self.q)
        P = self.pre_encoder
        expand = GF.Zeros((self.R1 + P.shape[0], self.R1 + self.R2))
        if self.R1:
            expand[:self.R1, :self.R1] = GF.Identity(self.R1)
        expand[self.R1:, self.R1:] = P
        return self.A @ expand

    def rows_of(self, receiver: int) -> List[int]:
        return self.net.rows_reaching(receiver)

    def describe(self) -> str:
        parts = [f"{format_subset(S)}:{v}" for S, v in self.split.items() if v]
        return f"q={self.q} R1={self.R1} R2={self.R2} split[{' '.join(parts)}]"


@dataclass(frozen=True)
class Transmission:
    """Symbols on every resource and the view of each receiver."""
    symbols: np.ndarray
    net: CombinationNetwork

    def view(self, receiver: int):
        return self.symbols[self.net.rows_reaching(receiver)]

    @property
    def views(self) -> Dict[int, np.ndarray]:
        return {i: self.view(i) for i in self.net.receivers}


def integer_split(split: Mapping) -> Dict[Subset, int]:
    """Normalize a split mapping (RateSplit or plain dict) to integer values."""
    items = split.items()
    out: Dict[Subset, int] = {}
    for S, value in items:
        if getattr(value, "denominator", 1) != 1:
            raise MalformedArgumentError(f"split value for {format_subset(S)} is not an integer: {value}")
        out[frozenset(S)] = int(value)
    return out


def negative_phi(split: Mapping[Subset, int]) -> int:
    """|alpha_phi| when alpha_phi < 0, else 0."""
    return max(-int(split.get(EMPTY, 0)), 0)
