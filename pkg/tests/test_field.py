from itertools import combinations, product

import numpy as np
import pytest

from combnet.errors import DimensionMismatchError, FieldTooSmallError, MalformedArgumentError
from combnet.field import (
    as_matrix,
    choose_field,
    field,
    left_inverse,
    rank,
    superregular,
    w1_recoverable,
)


def test_choose_field_is_next_prime_above_receiver_count():
    assert choose_field(4) == 5
    assert choose_field(6) == 7
    assert choose_field(1) == 3


def test_choose_field_respects_floor():
    assert choose_field(4, floor=8) == 11
    assert choose_field(4, floor=7) == 7
    assert choose_field(4, floor=2) == 5


def test_choose_field_rejects_empty_network():
    with pytest.raises(MalformedArgumentError):
        choose_field(0)


def test_field_rejects_composite():
    with pytest.raises(MalformedArgumentError):
        field(6)


def test_rank_over_small_field():
    # rows 2 and 3 sum to row 1 over F_3
    M = [[1, 1, 2], [1, 0, 1], [0, 1, 1]]
    assert rank(M, 3) == 2
    assert rank([[0, 0]], 5) == 0


def test_superregular_every_square_submatrix_invertible():
    P = superregular(4, 3, 5)
    assert P.shape == (4, 3)
    for rows in combinations(range(4), 3):
        assert rank(P[list(rows), :], 5) == 3


def test_superregular_needs_enough_points():
    with pytest.raises(FieldTooSmallError):
        superregular(6, 2, 5)
    with pytest.raises(DimensionMismatchError):
        superregular(2, 3, 5)


def test_w1_recoverable_requires_disjoint_column_spaces():
    B = [[1], [0]]
    assert w1_recoverable(B, [[0], [1]], 1, 5)
    assert not w1_recoverable(B, [[1], [0]], 1, 5)
    assert w1_recoverable(B, np.zeros((2, 0), dtype=int), 1, 5)


def test_left_inverse():
    M = as_matrix([[1, 2], [0, 1], [3, 4]], 7)
    L = left_inverse(M, 7)
    assert np.array_equal(L @ M, field(7).Identity(2))


def test_choose_field_skips_composites():
    assert choose_field(7) == 11
    assert choose_field(12) == 13


def test_rank_matches_transpose_rank():
    rng = np.random.default_rng(31)
    for q in (2, 3, 5, 7):
        for _ in range(25):
            rows, cols = rng.integers(1, 6, size=2)
            M = rng.integers(0, q, size=(rows, cols))
            # repeated row
            if rows > 1 and rng.random() < 0.3:
                M[-1] = M[0]
            assert rank(M, q) == rank(M.T, q)
            assert rank(M, q) <= min(rows, cols)


def _collision_free(B, T, q):
    """Brute force: no two (W1, W2) inputs with different W1 give the same output."""
    B = np.asarray(B, dtype=np.int64)
    T = np.asarray(T, dtype=np.int64)
    seen = {}
    for w1 in product(range(q), repeat=B.shape[1]):
        for w2 in product(range(q), repeat=T.shape[1]):
            out = tuple((B @ np.array(w1, dtype=np.int64) + T @ np.array(w2, dtype=np.int64)) % q)
            if seen.setdefault(out, w1) != w1:
                return False
    return True


@pytest.mark.parametrize("q", [3, 5])
def test_w1_recoverable_matches_collision_search(q):
    rng = np.random.default_rng(q)
    verdicts = set()
    for _ in range(60):
        rows = int(rng.integers(1, 4))
        r1 = int(rng.integers(1, 3))
        t = int(rng.integers(0, 4 - r1))
        B = rng.integers(0, q, size=(rows, r1))
        T = rng.integers(0, q, size=(rows, t))
        expected = _collision_free(B, T, q)
        assert w1_recoverable(B, T, r1, q) == expected
        verdicts.add(expected)
    assert verdicts == {True, False}


@pytest.mark.parametrize("a,b,q", [(3, 2, 5), (4, 3, 5), (5, 2, 5), (5, 5, 5), (6, 3, 7), (7, 4, 7), (3, 1, 3)])
def test_superregular_every_row_subset_is_invertible(a, b, q):
    P = superregular(a, b, q)
    assert P.shape == (a, b)
    for rows in combinations(range(a), b):
        assert rank(P[list(rows), :], q) == b


def test_superregular_points_must_fit_in_field():
    with pytest.raises(FieldTooSmallError):
        superregular(4, 2, 3)
    with pytest.raises(FieldTooSmallError):
        superregular(3, 2, 2)
