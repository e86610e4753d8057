"""
Error Types

Every failure the toolkit reports carries a stable ``code`` string and the
process exit code the command line maps it to:

    0 - feasible / pass
    1 - infeasible / fail (and every other domain error)
    2 - input error (malformed documents or arguments)
    3 - unsupported size (more than four public receivers)
"""

from typing import Any, Dict


class CombNetError(Exception):
    """Base class for all toolkit errors."""
    code = "combnet-error"
    exit_code = 1

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.details = details

    def to_dict(self) -> Dict[str, Any]:
        """Status dictionary in the shape the CLI prints."""
        payload = {"status": "error", "error": self.code, "message": str(self)}
        for key, value in self.details.items():
            payload[key] = value if isinstance(value, (int, str, bool)) or value is None else str(value)
        return payload


# ============================================================================
# Input errors (exit 2)
# ============================================================================

class MalformedDocumentError(CombNetError):
    code = "malformed-document"
    exit_code = 2


class ReceiverIndexError(CombNetError):
    code = "receiver-index-out-of-range"
    exit_code = 2


class MalformedArgumentError(CombNetError):
    code = "malformed-argument"
    exit_code = 2


# ============================================================================
# Size limits (exit 3)
# ============================================================================

class UnsupportedSizeError(CombNetError):
    code = "m-too-large"
    exit_code = 3


# ============================================================================
# Domain errors (exit 1)
# ============================================================================

class FieldTooSmallError(CombNetError):
    code = "field-too-small"


class DimensionMismatchError(CombNetError):
    code = "dimension-mismatch"


class FeasibilityViolatedError(CombNetError):
    code = "feasibility-violated"


class AssignmentNotFoundError(CombNetError):
    code = "assignment-not-found"


class InconsistentObservationError(CombNetError):
    code = "inconsistent-observation"


class LengthMismatchError(CombNetError):
    code = "length-mismatch"


class InfeasibleRatePairError(CombNetError):
    code = "infeasible-rate-pair"


class PlanNotFoundError(CombNetError):
    code = "plan-not-found"


class HallViolatedError(CombNetError):
    code = "hall-violated"

    def __init__(self, message: str, family=None, **details: Any):
        super().__init__(message, **details)
        self.family = family


class StreamExhaustedError(CombNetError):
    code = "stream-exhausted"


class DecodeFailureError(CombNetError):
    code = "decode-failure"

    def __init__(self, message: str, block: int, receiver: int):
        super().__init__(message, block=block, receiver=receiver)
        self.block = block
        self.receiver = receiver


class PreconditionViolatedError(CombNetError):
    code = "precondition-violated"


class CertificateNotFoundError(CombNetError):
    code = "certificate-not-found"


class IndexOutOfRangeError(CombNetError):
    code = "index-out-of-range"


class SolverError(CombNetError):
    """Internal consistency failure of the exact LP machinery."""
    code = "solver-error"
