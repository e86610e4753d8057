"""
Submodularity package.

Multifamily compression, saturated decompression chains and converse
certificates for projected half-planes.
"""

from .multifamily import (
    MultiFamily,
    Ground,
    Pattern,
    family,
    multifamily,
    star,
    stars,
    restrict,
    canonical,
    compress,
    counts,
    is_balanced,
    is_saturated,
    pattern,
    graph_edge_count,
)

from .decompression import (
    TEMPLATES,
    CompressionCertificate,
    decompress_elementary,
    decompress_to_standard,
)

from .converse import (
    ConverseRow,
    ConverseCertificate,
    converse_rows,
    existing_groups,
    converse_from_multipliers,
    fm_converse_certificate,
    serialize_certificate,
    parse_certificate,
)

__all__ = [
    "MultiFamily",
    "Ground",
    "Pattern",
    "family",
    "multifamily",
    "star",
    "stars",
    "restrict",
    "canonical",
    "compress",
    "counts",
    "is_balanced",
    "is_saturated",
    "pattern",
    "graph_edge_count",
    "TEMPLATES",
    "CompressionCertificate",
    "decompress_elementary",
    "decompress_to_standard",
    "ConverseRow",
    "ConverseCertificate",
    "converse_rows",
    "existing_groups",
    "converse_from_multipliers",
    "fm_converse_certificate",
    "serialize_certificate",
    "parse_certificate",
]
