"""
Encoding, per-receiver decoding and zero-error verification.

Every receiver observes Y = G x for a fixed matrix G built from the code.
Decoders precompute a left inverse of G once per receiver, so decoding is a
matrix-vector product followed by a consistency check.
"""

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..errors import DimensionMismatchError, InconsistentObservationError, LengthMismatchError, ReceiverIndexError
from ..field.gf import apply, as_matrix, as_vector, field as gf_field, hstack, independent_columns, left_inverse, rank, w1_recoverable
from ..network.model import CombinationNetwork, Subset
from .code import Transmission, ZeroStructuredCode

logger = logging.getLogger(__name__)

EXHAUSTIVE_LIMIT = 2 ** 16


@dataclass(frozen=True)
class ReceiverDecoder:
    """Y = G x over the receiver's rows; L is a left inverse of G."""
    receiver: int
    kind: str
    rows: Tuple[int, ...]
    G: np.ndarray
    L: np.ndarray
    columns: Tuple[int, ...] = ()

    def solve(self, Y, q: int):
        y = as_vector(Y, q)
        if y.shape[0] != len(self.rows):
            raise LengthMismatchError(
                f"receiver {self.receiver} observes {len(self.rows)} symbols, got {y.shape[0]}")
        x = apply(self.L, y, q)
        if not np.array_equal(apply(self.G, x, q), y):
            raise InconsistentObservationError(f"observation of receiver {self.receiver} is not a codeword")
        return x


def _rows_matrix(M, rows: List[int], q: int, width: int):
    return as_matrix(M[rows], q, cols=width) if rows else gf_field(q).Zeros((0, width))


def _public_decoder(code: ZeroStructuredCode, i: int, superposed: bool) -> ReceiverDecoder:
    layout = code.layout
    rows = code.rows_of(i)
    Z = _rows_matrix(code.A, rows, code.q, layout.width)
    visible = layout.visible_columns(i)
    B = Z[:, layout.w1_columns]
    T = Z[:, visible]
    if superposed:
        kept = visible
        G = hstack([B, T], code.q, len(rows))
    else:
        basis = independent_columns(T, code.q)
        kept = [visible[j] for j in basis]
        G = hstack([B, T[:, basis]], code.q, len(rows))
    kind = "superposed" if superposed else "public"
    return ReceiverDecoder(i, kind, tuple(rows), G, left_inverse(G, code.q), tuple(kept))


def _private_decoder(code: ZeroStructuredCode, p: int) -> ReceiverDecoder:
    rows = code.rows_of(p)
    G = _rows_matrix(code.effective, rows, code.q, code.R1 + code.R2)
    return ReceiverDecoder(p, "private", tuple(rows), G, left_inverse(G, code.q))


def decoder_for(code: ZeroStructuredCode, receiver: int, kind: str) -> ReceiverDecoder:
    """Cached decoder of one receiver."""
    key = (kind, receiver)
    if key not in code._decoders:
        if kind == "private":
            code._decoders[key] = _private_decoder(code, receiver)
        else:
            code._decoders[key] = _public_decoder(code, receiver, kind == "superposed")
    return code._decoders[key]


def _check_public(code: ZeroStructuredCode, i: int) -> None:
    if not code.net.is_public(i):
        raise ReceiverIndexError(f"receiver {i} is not a public receiver of this network")


def _check_private(code: ZeroStructuredCode, p: int) -> None:
    if not code.net.m < p <= code.net.K:
        raise ReceiverIndexError(f"receiver {p} is not a private receiver of this network")


# ============================================================================
# Encoding and decoding
# ============================================================================

def encode(code: ZeroStructuredCode, W1, W2) -> Transmission:
    """X = A (W1 ; W2), with W2 pre-encoded when the code has a pre-encoder."""
    w1 = as_vector(W1, code.q)
    w2 = as_vector(W2, code.q)
    if w1.shape[0] != code.R1 or w2.shape[0] != code.R2:
        raise LengthMismatchError(
            f"messages of length ({w1.shape[0]}, {w2.shape[0]}) for a code of rate ({code.R1}, {code.R2})")
    x = np.concatenate([np.asarray(w1).view(np.ndarray), np.asarray(w2).view(np.ndarray)])
    return Transmission(apply(code.effective, x, code.q), code.net)


def decode_public(code: ZeroStructuredCode, i: int, Y):
    """W1 from a public receiver's observation."""
    _check_public(code, i)
    x = decoder_for(code, i, "public").solve(Y, code.q)
    return x[:code.R1]


def decode_superposed(code: ZeroStructuredCode, i: int, Y) -> Tuple[np.ndarray, Dict[Subset, np.ndarray]]:
    """
    W1 and every sub-message W2^S with i in S, for multicast codes.

    Returns:
        (W1, {S: symbols of W2^S})
    """
    _check_public(code, i)
    decoder = decoder_for(code, i, "superposed")
    x = decoder.solve(Y, code.q)
    layout = code.layout
    parts: Dict[Subset, List[int]] = {}
    for position, column in enumerate(decoder.columns):
        parts.setdefault(layout.block_of(column), []).append(code.R1 + position)
    return x[:code.R1], {S: x[positions] for S, positions in parts.items()}


def decode_private(code: ZeroStructuredCode, p: int, Y):
    """(W1, W2) from a private receiver's observation."""
    _check_private(code, p)
    x = decoder_for(code, p, "private").solve(Y, code.q)
    return x[:code.R1], x[code.R1:]


# ============================================================================
# Verification
# ============================================================================

@dataclass
class VerificationReport:
    passed: bool
    failures: List[Dict[str, object]] = field(default_factory=list)
    exhaustive: bool = False
    messages_checked: int = 0

    @property
    def failing_receivers(self) -> List[int]:
        return sorted({f["receiver"] for f in self.failures if f.get("receiver") is not None})

    def to_dict(self) -> Dict[str, object]:
        return {
            "status": "pass" if self.passed else "fail",
            "failures": self.failures,
            "exhaustive": self.exhaustive,
            "messages_checked": self.messages_checked,
        }


def structural_failures(code: ZeroStructuredCode) -> List[Dict[str, object]]:
    """Mask violations and rank conditions, one entry per failing receiver."""
    failures: List[Dict[str, object]] = []
    raw = np.asarray(code.A).view(np.ndarray)
    if raw.shape != code.mask.shape:
        failures.append({"receiver": None, "reason": f"matrix shape {raw.shape} differs from mask {code.mask.shape}"})
        return failures
    if np.any(raw[~code.mask] != 0):
        failures.append({"receiver": None, "reason": "non-zero entry in a structural-zero position"})

    layout = code.layout
    for i in code.net.public_receivers:
        rows = code.rows_of(i)
        Z = _rows_matrix(code.A, rows, code.q, layout.width)
        visible = layout.visible_columns(i)
        if code.multicast:
            ok = rank(Z[:, layout.w1_columns + visible], code.q) == code.R1 + len(visible)
            reason = "cannot decode W1 and its superposed private messages"
        else:
            ok = w1_recoverable(Z[:, layout.w1_columns], Z[:, visible], code.R1, code.q)
            reason = "W1 not recoverable"
        if not ok:
            failures.append({"receiver": i, "reason": reason})

    M = code.effective
    for p in code.net.private_receivers:
        rows = code.rows_of(p)
        if rank(_rows_matrix(M, rows, code.q, code.R1 + code.R2), code.q) != code.R1 + code.R2:
            failures.append({"receiver": p, "reason": "(W1, W2) not recoverable"})
    return failures


def _all_messages(length: int, q: int):
    grid = np.array(list(product(range(q), repeat=length)), dtype=np.int64).T
    return gf_field(q)(grid)


def verify_code(code: ZeroStructuredCode, net: Optional[CombinationNetwork] = None,
                exhaustive_limit: int = EXHAUSTIVE_LIMIT) -> VerificationReport:
    """
    Algebraic rank checks, then an exhaustive round trip when q^(R1+R2) is small.

    Never raises for failing codes; the report names every failing receiver.
    """
    if net is not None and net.d != code.d:
        raise DimensionMismatchError(f"code has {code.d} rows, network has {net.d} resources")
    failures = structural_failures(code)
    length = code.R1 + code.R2
    total = code.q ** length
    if length == 0 or total > exhaustive_limit:
        return VerificationReport(not failures, failures, False, 1 if length == 0 else 0)

    failed = {f["receiver"] for f in failures}
    messages = _all_messages(length, code.q)
    X = code.effective @ messages
    for receiver in code.net.receivers:
        if receiver in failed:
            continue
        private = not code.net.is_public(receiver)
        kind = "private" if private else ("superposed" if code.multicast else "public")
        decoder = decoder_for(code, receiver, kind)
        rows = list(decoder.rows)
        Y = X[rows] if rows else gf_field(code.q).Zeros((0, total))
        xs = decoder.L @ Y if rows else gf_field(code.q).Zeros((decoder.L.shape[0], total))
        if private:
            expected = messages
        else:
            # W2 columns sit at message positions R1.. only without a pre-encoder
            expected_rows = list(range(code.R1)) + (list(decoder.columns) if kind == "superposed" else [])
            expected = messages[expected_rows]
            xs = xs[:len(expected_rows)]
        if not np.array_equal(xs, expected):
            failures.append({"receiver": receiver, "reason": "exhaustive round trip mismatch"})
    logger.info("Verified %s over %d message vectors: %d failures", code.describe(), total, len(failures))
    return VerificationReport(not failures, failures, True, total)
