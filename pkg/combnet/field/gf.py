"""
Prime-Field Linear Algebra

Thin helpers over ``galois`` field arrays: field selection, rank, the
superregular (MDS) pre-encoder and the common-message recoverability test
used by the decoders.
"""

import logging
from functools import lru_cache
from typing import List, Optional, Sequence

import galois
import numpy as np

from ..errors import DimensionMismatchError, FieldTooSmallError, MalformedArgumentError

logger = logging.getLogger(__name__)


def choose_field(K: int, floor: Optional[int] = None) -> int:
    """
    Pick the field size for a network with K receivers.

    Args:
        K: Total receiver count (K >= 1)
        floor: Optional caller override; the result is never below it

    Returns:
        Smallest prime q with q > max(K, 2), raised to the first prime
        >= floor when a floor is given
    """
    if K < 1:
        raise MalformedArgumentError(f"receiver count must be positive, got {K}")
    q = int(galois.next_prime(max(K, 2)))
    if floor is not None and floor > q:
        q = floor if galois.is_prime(floor) else int(galois.next_prime(floor))
    return q


@lru_cache(maxsize=None)
def field(q: int):
    """The ``galois`` array class of F_q."""
    if not galois.is_prime(q):
        raise MalformedArgumentError(f"field size {q} is not prime")
    return galois.GF(q)


def as_matrix(M, q: int, cols: Optional[int] = None):
    """Coerce nested lists / ndarrays / field arrays into a 2-D F_q array."""
    GF = field(q)
    arr = np.asarray(M).view(np.ndarray) if isinstance(M, galois.FieldArray) else np.asarray(M, dtype=np.int64)
    if arr.size == 0:
        rows = arr.shape[0] if arr.ndim >= 1 else 0
        width = cols if cols is not None else (arr.shape[1] if arr.ndim == 2 else 0)
        return GF.Zeros((rows, width))
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    return GF(np.mod(arr.astype(np.int64), q))


def as_vector(v, q: int):
    GF = field(q)
    arr = np.asarray(v).view(np.ndarray) if isinstance(v, galois.FieldArray) else np.asarray(v, dtype=np.int64)
    if arr.size == 0:
        return GF.Zeros(0)
    return GF(np.mod(arr.astype(np.int64).reshape(-1), q))


def rank(M, q: int) -> int:
    """Rank of M over F_q (0 for empty matrices)."""
    mat = as_matrix(M, q)
    if mat.size == 0:
        return 0
    return int(np.linalg.matrix_rank(mat))


def hstack(blocks: Sequence, q: int, rows: int):
    """Column concatenation that tolerates zero-width blocks."""
    parts = [np.asarray(as_matrix(b, q)).view(np.ndarray) for b in blocks]
    parts = [p for p in parts if p.size]
    if not parts:
        return field(q).Zeros((rows, 0))
    return field(q)(np.hstack(parts))


def superregular(a: int, b: int, q: int):
    """
    An a x b matrix whose every b x b submatrix is invertible.

    Rows are Vandermonde rows (1, x, ..., x^(b-1)) on the distinct points
    1, 2, ..., a reduced mod q.
    """
    if b > a:
        raise DimensionMismatchError(f"superregular matrix needs a >= b, got {a}x{b}")
    if q < a:
        raise FieldTooSmallError(f"{a} distinct evaluation points need q >= {a}, got q={q}", q=q, points=a)
    points = [k % q for k in range(1, a + 1)]
    rows = [[pow(x, e, q) for e in range(b)] for x in points]
    return as_matrix(rows, q, cols=b) if a else field(q).Zeros((0, b))


def w1_recoverable(B, T, R1: int, q: int) -> bool:
    """
    True iff the common message is recoverable from [B | T].

    The column space of B must have full rank R1 and be disjoint from the
    column space of T.
    """
    B = as_matrix(B, q, cols=R1)
    rows = B.shape[0]
    T = as_matrix(T, q)
    if T.size == 0:
        T = field(q).Zeros((rows, T.shape[1] if T.ndim == 2 else 0))
    if B.shape[1] != R1:
        raise DimensionMismatchError(f"B has {B.shape[1]} columns, expected R1={R1}")
    if T.shape[0] != rows and T.shape[1]:
        raise DimensionMismatchError(f"B has {rows} rows but T has {T.shape[0]}")
    if rank(B, q) != R1:
        return False
    return rank(hstack([B, T], q, rows), q) == R1 + rank(T, q)


def independent_columns(M, q: int) -> List[int]:
    """Greedy maximal set of linearly independent columns, left to right."""
    mat = as_matrix(M, q)
    chosen: List[int] = []
    current = 0
    for j in range(mat.shape[1]):
        candidate = chosen + [j]
        r = rank(mat[:, candidate], q)
        if r > current:
            chosen.append(j)
            current = r
    return chosen


def independent_rows(M, q: int) -> List[int]:
    return independent_columns(as_matrix(M, q).T, q)


def left_inverse(M, q: int):
    """
    L with L @ M = I for a full-column-rank M.

    Built by inverting a square submatrix on independent rows, so L is zero
    outside those rows.
    """
    mat = as_matrix(M, q)
    n, k = mat.shape
    GF = field(q)
    if k == 0:
        return GF.Zeros((0, n))
    rows = independent_rows(mat, q)
    if len(rows) != k:
        raise DimensionMismatchError(f"matrix has rank {len(rows)} < {k} columns; no left inverse")
    inverse = np.linalg.inv(mat[rows, :])
    L = GF.Zeros((k, n))
    L[:, rows] = inverse
    return L


def apply(M, x, q: int):
    """M @ x with empty-dimension guards."""
    mat = as_matrix(M, q)
    vec = as_vector(x, q)
    if mat.shape[1] != vec.shape[0]:
        raise DimensionMismatchError(f"cannot multiply {mat.shape} by vector of length {vec.shape[0]}")
    if mat.shape[0] == 0:
        return field(q).Zeros(0)
    if mat.shape[1] == 0:
        return field(q).Zeros(mat.shape[0])
    return mat @ vec


def random_matrix(rows: int, cols: int, q: int, rng: np.random.Generator):
    """Uniform i.i.d. entries of F_q drawn from a seeded numpy generator."""
    return field(q)(rng.integers(0, q, size=(rows, cols)))
