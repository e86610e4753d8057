"""
Block-Markov package.

Planning (virtual resources, multicast code, emulation, flush) and the
n-block simulator with backward decoding.
"""

from .planner import (
    FLUSH_POLICIES,
    Slot,
    VirtualResource,
    FlushPlan,
    BlockMarkovPlan,
    hall_violation,
    emulation_assignment,
    plan,
)

from .simulator import (
    MessageStream,
    BlockRecord,
    BlockTranscript,
    ReceiverDecoding,
    simulate,
    backward_decode,
    dump_transcript,
)

__all__ = [
    # Planning
    "FLUSH_POLICIES",
    "Slot",
    "VirtualResource",
    "FlushPlan",
    "BlockMarkovPlan",
    "hall_violation",
    "emulation_assignment",
    "plan",

    # Simulation
    "MessageStream",
    "BlockRecord",
    "BlockTranscript",
    "ReceiverDecoding",
    "simulate",
    "backward_decode",
    "dump_transcript",
]
