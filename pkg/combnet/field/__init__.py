"""
Prime-field arithmetic package.

Field selection, rank and the matrix predicates the decoders rely on.
"""

from .gf import (
    choose_field,
    field,
    as_matrix,
    as_vector,
    rank,
    hstack,
    superregular,
    w1_recoverable,
    independent_columns,
    independent_rows,
    left_inverse,
    apply,
    random_matrix,
)

__all__ = [
    "choose_field",
    "field",
    "as_matrix",
    "as_vector",
    "rank",
    "hstack",
    "superregular",
    "w1_recoverable",
    "independent_columns",
    "independent_rows",
    "left_inverse",
    "apply",
    "random_matrix",
]
