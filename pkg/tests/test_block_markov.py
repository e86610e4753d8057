import random
from fractions import Fraction
from itertools import combinations, product

import numpy as np
import pytest

from combnet.block_markov import (
    MessageStream,
    Slot,
    backward_decode,
    dump_transcript,
    emulation_assignment,
    hall_violation,
    plan,
    simulate,
)
from combnet.errors import (
    DecodeFailureError,
    HallViolatedError,
    InfeasibleRatePairError,
    MalformedArgumentError,
    ReceiverIndexError,
    StreamExhaustedError,
)
from combnet.field import field
from combnet.network import extend_network, power_set, up_closure
from combnet.regions import (
    FarkasCertificate,
    Witness,
    block_markov_system,
    feasible,
    multicast_system,
    split_name,
)

S = frozenset
EMPTY = frozenset()


@pytest.fixture(scope="module")
def fig3_plan(fig3):
    return plan(fig3, 0, 2, seed=7)


@pytest.fixture(scope="module")
def fig5_plan(fig5):
    return plan(fig5, 1, 3, seed=7)


# ============================================================================
# Emulation
# ============================================================================

def test_virtual_resource_takes_smallest_slot():
    alpha = {S({1}): 1, S({2}): 1, S({3}): 1}
    assert emulation_assignment(alpha, {EMPTY: 1}, 3) == {(EMPTY, 0): Slot(S({1}), 0)}


def test_emulation_respects_end_destinations():
    alpha = {S({1}): 1, S({1, 2}): 1}
    beta = {S({1}): 1, S({1, 2}): 1}
    assignment = emulation_assignment(alpha, beta, 2)
    assert assignment[(S({1, 2}), 0)] == Slot(S({1, 2}), 0)
    assert assignment[(S({1}), 0)] == Slot(S({1}), 0)


def test_hall_violation_names_family():
    alpha, beta = {S({1}): 1}, {S({2}): 1}
    expected = S({S({2}), S({1, 2})})
    assert hall_violation(alpha, beta, 2) == expected
    with pytest.raises(HallViolatedError) as exc:
        emulation_assignment(alpha, beta, 2)
    assert exc.value.family == expected


def test_hall_condition_holds():
    assert hall_violation({S({1, 2}): 1}, {S({1}): 1}, 2) is None


# ============================================================================
# Plans
# ============================================================================

def test_fig3_plan(fig3_plan):
    assert fig3_plan.scale == 1
    assert fig3_plan.beta == {EMPTY: 1}
    assert fig3_plan.alpha == {S({1}): 1, S({2}): 1, S({3}): 1}
    assert fig3_plan.multicast_rate == 3
    assert fig3_plan.extended.d == 4
    assert fig3_plan.flush.blocks == 1
    assert fig3_plan.to_dict()["beta"] == "beta{}=1"


def test_fig5_plan(fig5_plan):
    assert fig5_plan.scale == 1
    assert fig5_plan.virtual_count == 1
    assert fig5_plan.multicast_rate == 4
    assert hall_violation(fig5_plan.alpha, fig5_plan.beta, 4) is None


def test_plan_outside_region(fig3):
    with pytest.raises(InfeasibleRatePairError):
        plan(fig3, 1, 2)


# ============================================================================
# Transmission and backward decoding
# ============================================================================

@pytest.mark.parametrize("n", range(2, 9))
def test_fig3_delivery(fig3_plan, golden, n):
    expected = golden["block_markov"]["fig3"]
    transcript = simulate(fig3_plan, n, seed=n)
    assert transcript.delivered_common == expected["common_per_block"] * (n - 1)
    assert transcript.delivered_private == expected["private_per_block"] * (n - 1) + expected["private_first_block_extra"]
    for receiver in fig3_plan.net.receivers:
        decoded = backward_decode(fig3_plan, receiver, transcript)
        if not fig3_plan.net.is_public(receiver):
            assert np.array_equal(np.concatenate(decoded.private), np.concatenate([b.fresh for b in transcript.data_blocks]))


@pytest.mark.parametrize("n", range(2, 9))
def test_fig5_delivery(fig5_plan, golden, n):
    expected = golden["block_markov"]["fig5"]
    transcript = simulate(fig5_plan, n, seed=n)
    assert transcript.delivered_common == expected["common_per_block"] * (n - 1)
    assert transcript.delivered_private == expected["private_per_block"] * (n - 1) + expected["private_first_block_extra"]
    for receiver in fig5_plan.net.receivers:
        decoded = backward_decode(fig5_plan, receiver, transcript)
        assert len(decoded.common) == n - 1


def test_effective_rates_approach_target(fig3_plan, fig5_plan):
    for bm_plan, target in ((fig3_plan, (0, 2)), (fig5_plan, (1, 3))):
        rates = [simulate(bm_plan, n, seed=1).effective_rates for n in range(2, 9)]
        assert all(r2 < target[1] for _, r2 in rates)
        assert all(b[1] > a[1] for a, b in zip(rates, rates[1:]))
        assert all(b[0] >= a[0] for a, b in zip(rates, rates[1:]))
    assert simulate(fig3_plan, 4, seed=1).effective_rates == (Fraction(0), Fraction(7, 4))


def test_simulation_is_seeded(fig3_plan):
    first = dump_transcript(simulate(fig3_plan, 4, seed=3))
    assert first == dump_transcript(simulate(fig3_plan, 4, seed=3))
    assert "(deferred)" in first
    assert "block 4 (flush)" in first


def test_simulate_needs_two_blocks(fig3_plan):
    with pytest.raises(MalformedArgumentError):
        simulate(fig3_plan, 1)


def test_finite_stream_runs_dry(fig3_plan):
    with pytest.raises(StreamExhaustedError):
        simulate(fig3_plan, 3, stream=MessageStream(fig3_plan.q, symbols=[1, 2, 3]))


def test_tampered_block_is_reported(fig3_plan):
    transcript = simulate(fig3_plan, 3, seed=5)
    record = transcript.blocks[0]
    raw = np.asarray(record.symbols).view(np.ndarray)
    record.symbols = field(fig3_plan.q)((raw + 1) % fig3_plan.q)
    with pytest.raises(DecodeFailureError) as exc:
        backward_decode(fig3_plan, 4, transcript)
    assert exc.value.block == 1
    assert exc.value.receiver == 4


def test_backward_decode_rejects_unknown_receiver(fig3_plan):
    transcript = simulate(fig3_plan, 2, seed=1)
    with pytest.raises(ReceiverIndexError):
        backward_decode(fig3_plan, 7, transcript)


# ============================================================================
# Hall condition
# ============================================================================

def hall_holds(alpha, beta):
    """Hall's condition checked over every set of occupied virtual groups."""
    groups = [G for G, count in beta.items() if count]
    for size in range(1, len(groups) + 1):
        for chosen in combinations(groups, size):
            need = sum(beta[G] for G in chosen)
            offer = sum(count for T, count in alpha.items() if any(G <= T for G in chosen))
            if need > offer:
                return False
    return True


def random_split(rng, m):
    return {G: rng.randint(0, 2) for G in power_set(m) if rng.random() < 0.5}


def test_hall_violation_agrees_with_subset_check_m2():
    groups = power_set(2)
    for a in product(range(3), repeat=len(groups)):
        alpha = dict(zip(groups, a))
        for b in product(range(3), repeat=len(groups)):
            beta = dict(zip(groups, b))
            assert (hall_violation(alpha, beta, 2) is None) == hall_holds(alpha, beta), (alpha, beta)


def test_emulation_exists_exactly_when_hall_holds():
    rng = random.Random(99)
    for _ in range(150):
        m = rng.choice([1, 2, 3])
        alpha, beta = random_split(rng, m), random_split(rng, m)
        expected = hall_holds(alpha, beta)
        assert (hall_violation(alpha, beta, m) is None) == expected
        if not expected:
            with pytest.raises(HallViolatedError):
                emulation_assignment(alpha, beta, m)
            continue
        assignment = emulation_assignment(alpha, beta, m)
        assert len(assignment) == sum(beta.values())
        assert len(set(assignment.values())) == len(assignment)
        for (G, _), slot in assignment.items():
            assert G <= slot.subset
            assert slot.index < alpha[slot.subset]


def test_pair_resource_needs_pair_slot():
    alpha, beta = {S({1}): 1}, {S({1, 2}): 1}
    assert hall_violation(alpha, beta, 2) == S({S({1, 2})})
    with pytest.raises(HallViolatedError) as exc:
        emulation_assignment(alpha, beta, 2)
    assert exc.value.family == S({S({1, 2})})


def test_hall_check_uses_full_ground_set():
    beta = {S({1}): 1}
    assert hall_violation({}, beta, 3) == up_closure({1}, 3)
    assert hall_violation({S({1, 3}): 1}, beta, 3) is None
    assert emulation_assignment({S({1, 3}): 1}, beta, 3) == {(S({1}), 0): Slot(S({1, 3}), 0)}


# ============================================================================
# Corrected split for the four-receiver network
# ============================================================================

FIG5_ALPHA = {S({1, 2, 3}): 1, S({1, 4}): 1, S({2, 4}): 1, S({3, 4}): 1}
FIG5_BETA = {S({4}): 1}


def pinned(sys, alpha, beta=None):
    values = {name: 0 for name in sys.split_variables()}
    values.update({split_name("alpha", G): v for G, v in alpha.items()})
    values.update({split_name("beta", G): v for G, v in (beta or {}).items()})
    return values


def test_fig5_corrected_split_is_block_markov_feasible(fig5):
    sys = block_markov_system(fig5)
    assert isinstance(feasible(sys, 1, 3, pinned(sys, FIG5_ALPHA, FIG5_BETA)), Witness)
    triples = {G: 1 for G in (S({1, 2, 3}), S({1, 2, 4}), S({1, 3, 4}), S({2, 3, 4}))}
    assert isinstance(feasible(sys, 1, 3, pinned(sys, triples, FIG5_BETA)), FarkasCertificate)


def test_fig5_corrected_split_on_extended_network(fig5):
    extended = extend_network(fig5, FIG5_BETA)
    sys = multicast_system(extended)
    assert isinstance(feasible(sys, 1, 4, pinned(sys, FIG5_ALPHA)), Witness)
    assert emulation_assignment(FIG5_ALPHA, FIG5_BETA, 4) == {(S({4}), 0): Slot(S({1, 4}), 0)}


def test_fig5_plan_split_is_consistent(fig5_plan):
    sys = block_markov_system(fig5_plan.net)
    assert sum(fig5_plan.beta.values()) == sum(FIG5_BETA.values())
    assert sum(fig5_plan.alpha.values()) == sum(FIG5_ALPHA.values())
    assert isinstance(feasible(sys, 1, 3, pinned(sys, fig5_plan.alpha, fig5_plan.beta)), Witness)
    for (G, _), slot in fig5_plan.emulation.items():
        assert G <= slot.subset


# ============================================================================
# Degenerate and per-symbol flushes
# ============================================================================

def test_plan_without_virtual_resources(fig2):
    bm_plan = plan(fig2, 1, 2, seed=7)
    assert bm_plan.beta == {}
    assert bm_plan.emulation == {}
    assert bm_plan.flush.assignment == {}
    assert not bm_plan.flush.per_symbol
    transcript = simulate(bm_plan, 3, seed=2)
    assert transcript.flush_blocks == []
    assert transcript.block_count == 3
    for receiver in fig2.receivers:
        assert len(backward_decode(bm_plan, receiver, transcript).common) == 2


def test_per_symbol_flush_stays_inside_last_block(fig3):
    bm_plan = plan(fig3, 0, 2, seed=7, flush_policy="per-symbol")
    assert bm_plan.flush.per_symbol
    assert bm_plan.flush.blocks == bm_plan.virtual_count == 1
    n = 4
    transcript = simulate(bm_plan, n, seed=4)
    assert all(record.index <= n for record in transcript.blocks)
    assert [record.part for record in transcript.flush_blocks] == list(range(1, bm_plan.virtual_count + 1))
    assert transcript.block_count == n
    assert f"block {n} (flush) part 1" in dump_transcript(transcript)
    for receiver in fig3.receivers:
        assert len(backward_decode(bm_plan, receiver, transcript).common) == n - 1


def test_unknown_flush_policy(fig3):
    with pytest.raises(MalformedArgumentError):
        plan(fig3, 0, 2, flush_policy="eager")
