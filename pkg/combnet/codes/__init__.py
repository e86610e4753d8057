"""
Code synthesis package.

Zero-structured and pre-encoded linear codes, their decoders and exhaustive
zero-error verification.
"""

from .code import (
    ColumnLayout,
    ZeroStructuredCode,
    Transmission,
)

from .codec import (
    ReceiverDecoder,
    VerificationReport,
    encode,
    decode_public,
    decode_superposed,
    decode_private,
    structural_failures,
    verify_code,
)

from .synthesis import (
    RETRY_BUDGET,
    scale_to_integer,
    build_zs,
    build_pre,
    code_from_matrix,
)

from .code_io import (
    export_code,
    import_code,
)

__all__ = [
    # Code model
    "ColumnLayout",
    "ZeroStructuredCode",
    "Transmission",

    # Encoding and decoding
    "ReceiverDecoder",
    "VerificationReport",
    "encode",
    "decode_public",
    "decode_superposed",
    "decode_private",
    "structural_failures",
    "verify_code",

    # Synthesis
    "RETRY_BUDGET",
    "scale_to_integer",
    "build_zs",
    "build_pre",
    "code_from_matrix",

    # Text dump
    "export_code",
    "import_code",
]
