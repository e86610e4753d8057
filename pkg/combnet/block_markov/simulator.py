"""
n-block transmission and backward decoding.

Blocks 1..n-1 are data blocks of the multicast code. From block 2 on, the
emulated slots carry the virtual-resource symbols of the previous block
instead of fresh data. Block n (the flush) delivers the virtual symbols of
block n-1, in numbered parts when each symbol has its own flush code.
Receivers decode the flush first and walk back to block 1, each
block handing its emulated slots to the block before it as virtual
observations.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

import numpy as np

from ..codes.codec import decode_private, decode_superposed, encode
from ..errors import CombNetError, DecodeFailureError, MalformedArgumentError, ReceiverIndexError, StreamExhaustedError
from ..field.gf import field as gf_field
from ..network.model import format_subset
from .planner import BlockMarkovPlan, VirtualResource

logger = logging.getLogger(__name__)


class MessageStream:
    """
    Source of message symbols over F_q.

    A finite iterable runs dry with StreamExhaustedError; without one the
    stream draws uniform symbols from a seeded generator.
    """

    def __init__(self, q: int, symbols: Optional[Iterable[int]] = None, seed: Optional[int] = None):
        self.q = q
        self._symbols: Optional[Iterator[int]] = iter(symbols) if symbols is not None else None
        self._rng = np.random.default_rng(seed)
        self.taken = 0

    def take(self, count: int):
        GF = gf_field(self.q)
        if self._symbols is None:
            values = self._rng.integers(0, self.q, size=count)
        else:
            values = []
            for _ in range(count):
                value = next(self._symbols, None)
                if value is None:
                    raise StreamExhaustedError(f"message stream ran out after {self.taken} symbols",
                                               taken=self.taken)
                values.append(int(value) % self.q)
                self.taken += 1
            return GF(np.array(values, dtype=np.int64)) if values else GF.Zeros(0)
        self.taken += count
        return GF(values) if count else GF.Zeros(0)


@dataclass
class BlockRecord:
    """One block: fresh messages, real-resource symbols and virtual-symbol bookkeeping."""
    index: int
    kind: str
    common: np.ndarray
    fresh: np.ndarray
    symbols: np.ndarray
    carried: Dict[VirtualResource, int] = field(default_factory=dict)
    deferred: Dict[VirtualResource, int] = field(default_factory=dict)
    part: int = 0


@dataclass
class BlockTranscript:
    plan: BlockMarkovPlan
    n: int
    blocks: List[BlockRecord] = field(default_factory=list)

    @property
    def data_blocks(self) -> List[BlockRecord]:
        return [b for b in self.blocks if b.kind == "data"]

    @property
    def flush_blocks(self) -> List[BlockRecord]:
        return [b for b in self.blocks if b.kind == "flush"]

    @property
    def delivered_common(self) -> int:
        return sum(len(b.common) for b in self.data_blocks)

    @property
    def delivered_private(self) -> int:
        return sum(len(b.fresh) for b in self.data_blocks)

    @property
    def block_count(self) -> int:
        """Data blocks plus flush parts, in block-sized network uses (an empty flush still takes one)."""
        return len(self.data_blocks) + max(len(self.flush_blocks), 1)

    @property
    def effective_rates(self) -> Tuple[Fraction, Fraction]:
        """Delivered symbols per use of the original network."""
        uses = self.block_count * self.plan.scale
        return Fraction(self.delivered_common, uses), Fraction(self.delivered_private, uses)


def simulate(plan: BlockMarkovPlan, n: int, stream: Optional[MessageStream] = None,
             seed: Optional[int] = None) -> BlockTranscript:
    """
    Run n - 1 data blocks and the flush.

    Args:
        n: Total block count including the flush block (n >= 2)
        stream: Message source; a seeded random stream when omitted
    """
    if n < 2:
        raise MalformedArgumentError(f"block-Markov transmission needs n >= 2 blocks, got {n}")
    stream = stream or MessageStream(plan.q, seed=seed)
    GF = gf_field(plan.q)
    code = plan.mcode
    real = plan.extended.real_rows()
    virtual_rows = plan.virtual_rows
    emulated = {v: plan.slot_position(slot) for v, slot in plan.emulation.items()}
    emulated_positions = set(emulated.values())
    width = plan.multicast_rate

    transcript = BlockTranscript(plan, n)
    previous: Dict[VirtualResource, int] = {}
    for t in range(1, n):
        common = stream.take(plan.R1)
        W2 = GF.Zeros(width)
        if t == 1:
            fresh_positions = list(range(width))
        else:
            fresh_positions = [j for j in range(width) if j not in emulated_positions]
            for v, position in emulated.items():
                W2[position] = previous[v]
        fresh = stream.take(len(fresh_positions))
        if fresh_positions:
            W2[fresh_positions] = fresh
        X = encode(code, common, W2).symbols
        deferred = {v: int(X[row]) for v, row in virtual_rows.items()}
        transcript.blocks.append(BlockRecord(t, "data", common, fresh, X[real] if real else GF.Zeros(0),
                                             carried=dict(previous) if t > 1 else {}, deferred=deferred))
        previous = deferred
        logger.debug("Block %d: %d common, %d fresh private symbols", t, len(common), len(fresh))

    flush = plan.flush
    if flush.per_symbol:
        for k, (v, slot) in enumerate(sorted(flush.assignment.items(), key=lambda item: item[1].sort_key())):
            fcode = flush.codes[v[0]]
            X = encode(fcode, GF.Zeros(0), GF([previous[v]])).symbols
            transcript.blocks.append(BlockRecord(n, "flush", GF.Zeros(0), GF.Zeros(0), X,
                                                 carried={v: previous[v]}, part=k + 1))
    elif flush.assignment:
        fcode = flush.codes[frozenset()]
        W2 = GF.Zeros(fcode.R2)
        for v, slot in flush.assignment.items():
            W2[fcode.layout.columns(slot.subset)[slot.index]] = previous[v]
        X = encode(fcode, GF.Zeros(0), W2).symbols
        transcript.blocks.append(BlockRecord(n, "flush", GF.Zeros(0), GF.Zeros(0), X, carried=dict(previous)))
    logger.info("Simulated %d blocks: %d common and %d private symbols delivered",
                transcript.block_count, transcript.delivered_common, transcript.delivered_private)
    return transcript


@dataclass
class ReceiverDecoding:
    receiver: int
    common: List[np.ndarray] = field(default_factory=list)
    private: List[np.ndarray] = field(default_factory=list)


def _flush_values(plan: BlockMarkovPlan, receiver: int, transcript: BlockTranscript,
                  wanted: List[VirtualResource]) -> Dict[VirtualResource, int]:
    """Virtual symbols of the last data block, recovered from the flush."""
    values: Dict[VirtualResource, int] = {}
    flush = plan.flush
    public = plan.net.is_public(receiver)
    if flush.per_symbol:
        by_resource = {next(iter(b.carried)): b for b in transcript.flush_blocks}
        for v in wanted:
            fcode = flush.codes[v[0]]
            Y = by_resource[v].symbols[fcode.rows_of(receiver)]
            if public:
                _, parts = decode_superposed(fcode, receiver, Y)
                values[v] = int(parts[v[0]][0])
            else:
                values[v] = int(decode_private(fcode, receiver, Y)[1][0])
        return values
    if not wanted:
        return values
    fcode = flush.codes[frozenset()]
    Y = transcript.flush_blocks[0].symbols[fcode.rows_of(receiver)]
    if public:
        _, parts = decode_superposed(fcode, receiver, Y)
        for v in wanted:
            slot = flush.assignment[v]
            values[v] = int(parts[slot.subset][slot.index])
    else:
        _, W2 = decode_private(fcode, receiver, Y)
        for v in wanted:
            slot = flush.assignment[v]
            values[v] = int(W2[fcode.layout.columns(slot.subset)[slot.index]])
    return values


def backward_decode(plan: BlockMarkovPlan, receiver: int, transcript: BlockTranscript) -> ReceiverDecoding:
    """
    Decode the flush, then blocks n-1 down to 1.

    Every decoded block is compared with the transcript.

    Raises:
        DecodeFailureError: naming the first block (in decoding order) that
            does not reproduce the transmitted messages
    """
    if not 1 <= receiver <= plan.net.K:
        raise ReceiverIndexError(f"receiver {receiver} outside 1..{plan.net.K}")
    GF = gf_field(plan.q)
    code = plan.mcode
    public = plan.net.is_public(receiver)
    virtual_rows = plan.virtual_rows
    seen = [v for v in virtual_rows if not public or receiver in v[0]]
    rows = plan.extended.rows_reaching(receiver)
    row_of = {row: v for v, row in virtual_rows.items()}
    data = transcript.data_blocks

    try:
        known = _flush_values(plan, receiver, transcript, seen)
    except CombNetError as exc:
        raise DecodeFailureError(f"flush decoding failed: {exc}", block=transcript.n, receiver=receiver) from exc
    if any(known[v] != data[-1].deferred[v] for v in seen):
        raise DecodeFailureError("flush does not reproduce the deferred symbols", block=transcript.n, receiver=receiver)

    result = ReceiverDecoding(receiver)
    for record in reversed(data):
        t = record.index
        real_symbols = record.symbols
        observed = [known[row_of[row]] if row in row_of else int(real_symbols[row]) for row in rows]
        Y = GF(observed) if observed else GF.Zeros(0)
        try:
            if public:
                W1, parts = decode_superposed(code, receiver, Y)
                slots = {v: int(parts[s.subset][s.index]) for v, s in plan.emulation.items() if v in seen}
            else:
                W1, W2 = decode_private(code, receiver, Y)
                slots = {v: int(W2[plan.slot_position(s)]) for v, s in plan.emulation.items()}
        except CombNetError as exc:
            raise DecodeFailureError(f"block {t}: {exc}", block=t, receiver=receiver) from exc
        if not np.array_equal(W1, record.common):
            raise DecodeFailureError(f"block {t}: common message mismatch", block=t, receiver=receiver)
        result.common.insert(0, W1)
        if not public:
            emulated = {plan.slot_position(s) for s in plan.emulation.values()} if t > 1 else set()
            fresh = W2[[j for j in range(plan.multicast_rate) if j not in emulated]]
            if not np.array_equal(fresh, record.fresh):
                raise DecodeFailureError(f"block {t}: private message mismatch", block=t, receiver=receiver)
            result.private.insert(0, fresh)
        if t > 1:
            known = slots
            if any(known[v] != record.carried[v] for v in seen):
                raise DecodeFailureError(f"block {t}: emulated slots disagree with block {t - 1}",
                                         block=t, receiver=receiver)
    logger.debug("Receiver %d decoded %d blocks", receiver, len(data))
    return result


def dump_transcript(transcript: BlockTranscript) -> str:
    """Per-block table of resource symbols; virtual deferrals are flagged."""
    plan = transcript.plan
    lines = [f"# block-Markov transcript: n={transcript.n} q={plan.q} scale={plan.scale}"]
    for record in transcript.blocks:
        suffix = f" part {record.part}" if record.part else ""
        lines.append(f"block {record.index} ({record.kind}){suffix}")
        if record.kind == "data":
            lines.append("  W1 " + " ".join(str(int(v)) for v in record.common))
            lines.append("  fresh " + " ".join(str(int(v)) for v in record.fresh))
        for e, value in enumerate(record.symbols):
            res = plan.net.resources[e]
            lines.append(f"  resource {e} {format_subset(res.public)} -> {int(value)}")
        for (S, k), value in sorted(record.deferred.items(), key=lambda item: (len(item[0][0]), sorted(item[0][0]), item[0][1])):
            lines.append(f"  virtual {format_subset(S)}#{k} -> {value} (deferred)")
        for (S, k), value in record.carried.items():
            lines.append(f"  carried {format_subset(S)}#{k} = {value}")
    return "\n".join(lines) + "\n"
