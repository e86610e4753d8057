"""
Code synthesis.

Structural zeros are fixed by the rate split; the remaining entries are
indeterminates. A uniformly random assignment over F_q (q > K) works with
high probability, so synthesis draws seeded random assignments, verifies
the rank conditions and retries. Tiny instances over F_2 / F_3 fall back to
exhaustive search.
"""

import logging
import math
from fractions import Fraction
from functools import reduce
from itertools import product
from typing import Dict, Mapping, Optional, Tuple

import numpy as np

from ..errors import AssignmentNotFoundError, FeasibilityViolatedError, FieldTooSmallError
from ..field.gf import as_matrix, choose_field, random_matrix, superregular
from ..network.model import EMPTY, CombinationNetwork, Subset, format_subset
from ..regions.feasibility import FarkasCertificate, feasible
from ..regions.systems import LinearSystem, multicast_system, prop1_system, split_name, thm1_system, to_fraction
from .code import ColumnLayout, ZeroStructuredCode, integer_split, negative_phi
from .codec import structural_failures

logger = logging.getLogger(__name__)

RETRY_BUDGET = 100
EXHAUSTIVE_INDETERMINATES = 20
EXHAUSTIVE_FIELD = 3


def scale_to_integer(R1, R2, split: Mapping) -> Tuple[int, Fraction, Fraction, Dict[Subset, Fraction]]:
    """
    Least common denominator n and the n-scaled rate triple.

    Returns:
        (n, n*R1, n*R2, {S: n*alpha_S}); every scaled value is integral
    """
    values = [to_fraction(R1), to_fraction(R2)] + [to_fraction(v) for v in split.values()]
    n = reduce(lambda acc, v: acc * v.denominator // math.gcd(acc, v.denominator), values, 1)
    scaled = {frozenset(S): to_fraction(v) * n for S, v in split.items()}
    return n, to_fraction(R1) * n, to_fraction(R2) * n, scaled


def _require_feasible(sys: LinearSystem, R1: int, R2: int, split: Mapping[Subset, int]) -> None:
    fixed = {split_name("alpha", S): value for S, value in split.items()}
    for name in sys.split_variables("alpha"):
        fixed.setdefault(name, 0)
    result = feasible(sys, R1, R2, fixed)
    if isinstance(result, FarkasCertificate):
        violated = [label for label, _ in result.rows(sys)]
        raise FeasibilityViolatedError(
            f"rate pair ({R1}, {R2}) with this split violates the {sys.name} constraints",
            rows=", ".join(violated))


def _require_field(net: CombinationNetwork, q: int) -> None:
    if q <= net.K:
        raise FieldTooSmallError(f"synthesis needs q > K={net.K}, got q={q}", q=q)


def _search(net: CombinationNetwork, q: int, R1: int, R2: int, split: Dict[Subset, int],
            pre_encoder, multicast: bool, seed: Optional[int], attempts: int) -> ZeroStructuredCode:
    layout = ColumnLayout.from_split(net.m, R1, split)
    mask = layout.mask(net)

    def make(A) -> ZeroStructuredCode:
        return ZeroStructuredCode(net=net, q=q, R1=R1, R2=R2, split=dict(split), A=A, mask=mask,
                                  pre_encoder=pre_encoder, multicast=multicast,
                                  resource_order=tuple(range(net.d)))

    rng = np.random.default_rng(seed)
    for attempt in range(1, attempts + 1):
        A = random_matrix(net.d, layout.width, q, rng)
        A[~mask] = 0
        code = make(A)
        failures = structural_failures(code)
        if not failures:
            logger.info("Synthesized %s on attempt %d", code.describe(), attempt)
            return code
        logger.debug("Attempt %d failed at receivers %s", attempt, [f["receiver"] for f in failures])

    positions = np.argwhere(mask)
    if len(positions) <= EXHAUSTIVE_INDETERMINATES and q <= EXHAUSTIVE_FIELD:
        logger.info("Random search exhausted; enumerating %d^%d assignments", q, len(positions))
        for values in product(range(q), repeat=len(positions)):
            raw = np.zeros(mask.shape, dtype=np.int64)
            raw[tuple(positions.T)] = values
            code = make(as_matrix(raw, q, cols=layout.width))
            if not structural_failures(code):
                return code
    raise AssignmentNotFoundError(
        f"no valid assignment over F_{q} after {attempts} random attempts", q=q, attempts=attempts)


def build_zs(net: CombinationNetwork, split: Mapping, R1: int, R2: int, seed: Optional[int] = None,
             q: Optional[int] = None, multicast: bool = False, attempts: int = RETRY_BUDGET) -> ZeroStructuredCode:
    """
    Zero-structured linear superposition code.

    Args:
        split: Integer alpha_S >= 0 summing to R2
        multicast: Also let every public receiver i decode each W2^S with i in S

    Returns:
        A verified ZeroStructuredCode
    """
    split = integer_split(split)
    negative = [format_subset(S) for S, v in split.items() if v < 0]
    if negative:
        raise FeasibilityViolatedError(f"zero-structured codes need non-negative splits; negative at {negative}")
    R1, R2 = int(R1), int(R2)
    _require_feasible(multicast_system(net) if multicast else prop1_system(net), R1, R2, split)
    q = q or choose_field(net.K)
    _require_field(net, q)
    return _search(net, q, R1, R2, split, None, multicast, seed, attempts)


def build_pre(net: CombinationNetwork, split: Mapping, R1: int, R2: int, seed: Optional[int] = None,
              q: Optional[int] = None, attempts: int = RETRY_BUDGET) -> ZeroStructuredCode:
    """
    Pre-encoded code for a split with alpha_phi < 0.

    W2 is inflated by a superregular (R2 + |alpha_phi|) x R2 matrix P and the
    pseudo-message is carried by a zero-structured Z over the non-phi
    blocks. alpha_phi >= 0 needs no pre-encoder and yields build_zs.
    """
    split = integer_split(split)
    if split.get(EMPTY, 0) >= 0:
        return build_zs(net, split, R1, R2, seed=seed, q=q, attempts=attempts)
    R1, R2 = int(R1), int(R2)
    _require_feasible(thm1_system(net), R1, R2, split)
    q = q or choose_field(net.K, floor=R2 + negative_phi(split))
    P = superregular(R2 + negative_phi(split), R2, q)
    _require_field(net, q)
    return _search(net, q, R1, R2, split, P, False, seed, attempts)


def code_from_matrix(net: CombinationNetwork, A, R1: int, split: Mapping, q: int,
                     pre_encoder=None, multicast: bool = False) -> ZeroStructuredCode:
    """
    Wrap a hand-written encoding matrix.

    Only the shape and the zero structure are checked here; decodability is
    left to verify_code.
    """
    split = integer_split(split)
    R1 = int(R1)
    R2 = sum(split.values())
    layout = ColumnLayout.from_split(net.m, R1, split)
    matrix = as_matrix(A, q, cols=layout.width)
    if matrix.shape != (net.d, layout.width):
        raise FeasibilityViolatedError(
            f"matrix is {matrix.shape[0]}x{matrix.shape[1]}, layout needs {net.d}x{layout.width}")
    mask = layout.mask(net)
    if np.any(np.asarray(matrix).view(np.ndarray)[~mask] != 0):
        raise FeasibilityViolatedError("matrix has a non-zero entry in a structural-zero position")
    if pre_encoder is not None:
        pre_encoder = as_matrix(pre_encoder, q, cols=R2)
    elif split.get(EMPTY, 0) < 0:
        pre_encoder = superregular(R2 + negative_phi(split), R2, q)
    return ZeroStructuredCode(net=net, q=q, R1=R1, R2=R2, split=split, A=matrix, mask=mask,
                              pre_encoder=pre_encoder, multicast=multicast,
                              resource_order=tuple(range(net.d)))

