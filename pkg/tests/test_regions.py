import random
from fractions import Fraction

import pytest

from combnet.errors import MalformedArgumentError, SolverError
from combnet.network import extend_network, load_network, scale_network
from combnet.regions import (
    R1,
    R2,
    FarkasCertificate,
    LinearSystem,
    RateRegion2D,
    RegionRelation,
    Relation,
    Scheme,
    Witness,
    build_system,
    compare,
    cutset_region,
    explicit_m2_region,
    feasible,
    fourier_motzkin,
    lp_facets,
    multicast_system,
    normalize_halfplane,
    optimize,
    parse_region,
    primitive,
    project,
    prop1_system,
    relaxed_system,
    split_name,
    thm1_system,
    thm2_system,
)

SCHEMES = {"zs": Scheme.PROP1, "pre": Scheme.THM1, "bm": Scheme.THM2}


def random_m2_network(rng):
    resources = []
    for _ in range(rng.randint(1, 7)):
        public = rng.choice([[], [1], [2], [1, 2]])
        privates = [p for p in (3, 4) if rng.random() < 0.6]
        resources.append({"public": public, "privates": privates})
    return load_network({"public_receivers": 2, "private_receivers": 2, "resources": resources})


# ============================================================================
# Feasibility
# ============================================================================

def test_golden_checks(golden, request):
    for case in golden["checks"]:
        net = request.getfixturevalue(case["net"])
        sys = build_system(SCHEMES[case["scheme"]], net)
        result = feasible(sys, *case["rates"])
        assert result.feasible is case["feasible"], case
        assert result.verify(sys)


def test_fig3_zero_structured_infeasibility_certificate(fig3):
    sys = prop1_system(fig3)
    result = feasible(sys, 0, 2)
    assert isinstance(result, FarkasCertificate)
    assert result.verify(sys)
    assert result.rows(sys)
    assert result.to_dict(sys)


def test_fig3_pre_encoded_witness(fig3, golden):
    sys = thm1_system(fig3)
    result = feasible(sys, 0, 2)
    assert isinstance(result, Witness)
    split = result.split(sys, "alpha")
    expected = {k: Fraction(v) for k, v in golden["fig3_pre_split"].items()}
    for S in sys.groups.values():
        label = "{" + ",".join(str(i) for i in sorted(S)) + "}"
        assert split[S] == expected.get(label, 0)


def test_tampered_witness_fails_verification(fig3):
    sys = thm1_system(fig3)
    witness = feasible(sys, 0, 2)
    values = dict(witness.values)
    values[R1] = Fraction(5)
    assert not Witness(values, sys.name).verify(sys)


def test_optimize_maximum_common_rate(fig7):
    best = optimize(prop1_system(fig7), {R1: 1})
    assert best.value == 2


# ============================================================================
# Projection
# ============================================================================

@pytest.mark.parametrize("name, scheme", [("fig2", "zs"), ("fig2", "pre"), ("fig7", "zs")])
def test_golden_regions(golden, request, name, scheme):
    net = request.getfixturevalue(name)
    region = project(build_system(SCHEMES[scheme], net))
    assert [list(h) for h in region.halfplanes] == golden["regions"][name][scheme]


def test_fig8_pre_region_has_converse_halfplane(fig8, golden):
    region = project(thm1_system(fig8))
    assert tuple(golden["contains_halfplane"]["fig8"]["pre"]) in region.halfplanes


@pytest.mark.parametrize("name", ["fig2", "fig3", "fig7", "fig8"])
def test_pre_encoded_and_block_markov_regions_coincide(request, name):
    net = request.getfixturevalue(name)
    result = compare(project(thm1_system(net)), project(thm2_system(net)))
    assert result.relation is RegionRelation.EQUAL


@pytest.mark.parametrize("name", ["fig7", "fig8"])
def test_fm_and_lp_projections_agree(request, name):
    sys = thm1_system(request.getfixturevalue(name))
    assert compare(project(sys, method="fm"), project(sys, method="lp")).relation is RegionRelation.EQUAL


def test_relaxed_nonnegativity_projects_like_pre_encoded(fig8):
    assert compare(project(relaxed_system(fig8)), project(thm1_system(fig8))).relation is RegionRelation.EQUAL


def test_fig5_block_markov_reaches_beyond_pre_encoding(fig5):
    pre = project(thm1_system(fig5), method="lp")
    bm = project(thm2_system(fig5), method="lp")
    assert not pre.contains(1, 3)
    assert bm.contains(1, 3)


def test_fourier_motzkin_rows_are_integral(fig7):
    rows = fourier_motzkin(prop1_system(fig7))
    assert all(isinstance(v, int) for row in rows for v in row)
    assert RateRegion2D.from_halfplanes(rows).halfplanes == ((1, 0, 2), (1, 1, 4), (2, 1, 5))


def test_projection_rejects_unknown_method(fig7):
    with pytest.raises(MalformedArgumentError):
        project(prop1_system(fig7), method="simplex")


def test_two_public_receivers_closed_form():
    rng = random.Random(7)
    for _ in range(50):
        net = random_m2_network(rng)
        result = compare(project(prop1_system(net)), explicit_m2_region(net))
        assert result.relation is RegionRelation.EQUAL, net


def test_closed_form_fig7(fig7):
    assert explicit_m2_region(fig7).halfplanes == ((1, 0, 2), (1, 1, 4), (2, 1, 5))


def test_closed_form_needs_two_public_receivers(fig3):
    with pytest.raises(MalformedArgumentError):
        explicit_m2_region(fig3)


# ============================================================================
# Regions
# ============================================================================

def test_normalize_halfplane():
    assert normalize_halfplane(2, 4, 6) == (1, 2, 3)
    assert primitive([Fraction(1, 2), Fraction(1)], Fraction(2)) == ((1, 2), 4)
    with pytest.raises(MalformedArgumentError):
        normalize_halfplane(0, 0, 1)


def test_redundant_rows_are_dropped():
    region = RateRegion2D.from_halfplanes([(1, 0, 2), (1, 1, 4), (2, 1, 5), (0, 1, 10), (2, 2, 8), (1, 0, 3)])
    assert region.halfplanes == ((1, 0, 2), (1, 1, 4), (2, 1, 5))


def test_vertices_fig7_region():
    region = RateRegion2D.from_halfplanes([(1, 0, 2), (1, 1, 4), (2, 1, 5)])
    assert set(region.vertices()) == {(0, 0), (2, 0), (2, 1), (1, 3), (0, 4)}
    assert len(region.export_vertices_csv().splitlines()) == 5
    assert region.maximum((1, 1)) == 4


def test_unbounded_region():
    region = RateRegion2D.from_halfplanes([(1, 0, 2)])
    assert not region.bounded
    assert region.contains(1, 100)


def test_parse_region_reads_export():
    region = RateRegion2D.from_halfplanes([(1, 0, 2), (1, 1, 4), (2, 1, 5)])
    assert parse_region("# fig7\n" + region.export_text()) == region


def test_compare_reports_witness(fig7):
    zs = project(prop1_system(fig7))
    outer = cutset_region(fig7)
    result = compare(zs, outer)
    assert result.relation is RegionRelation.A_IN_B
    x, y = result.b_only
    assert outer.contains(x, y) and not zs.contains(x, y)
    assert result.to_dict()["relation"] == "A⊂B"


def random_network(rng, m, privates=2):
    private_ids = list(range(m + 1, m + privates + 1))
    resources = []
    for _ in range(rng.randint(1, 6)):
        public = [i for i in range(1, m + 1) if rng.random() < 0.4]
        resources.append({"public": public, "privates": [p for p in private_ids if rng.random() < 0.6]})
    return load_network({"public_receivers": m, "private_receivers": privates, "resources": resources})


NESTED = {RegionRelation.EQUAL, RegionRelation.A_IN_B}


def test_regions_are_nested():
    rng = random.Random(17)
    for m, trials in ((2, 20), (3, 6)):
        for _ in range(trials):
            net = random_network(rng, m)
            zs, pre = project(prop1_system(net)), project(thm1_system(net))
            assert compare(zs, pre).relation in NESTED, net
            assert compare(pre, cutset_region(net)).relation in NESTED, net


@pytest.mark.parametrize("name, k", [("fig2", 2), ("fig7", 3), ("fig8", 2)])
def test_scaled_network_scales_region(request, name, k):
    net = request.getfixturevalue(name)
    for builder in (prop1_system, thm1_system):
        base = project(builder(net))
        expected = RateRegion2D.from_halfplanes([(a, b, k * e) for a, b, e in base.halfplanes])
        scaled = project(builder(scale_network(net, k)))
        assert compare(scaled, expected).relation is RegionRelation.EQUAL


@pytest.mark.parametrize("builder", [prop1_system, thm1_system, thm2_system])
def test_fig5_region_agrees_with_point_checks(fig5, builder):
    sys = builder(fig5)
    region = project(sys)
    rng = random.Random(builder.__name__)
    mismatches = []
    for _ in range(60):
        r1 = Fraction(rng.randint(0, 12), 4)
        r2 = Fraction(rng.randint(0, 24), 4)
        if region.contains(r1, r2) != feasible(sys, r1, r2).feasible:
            mismatches.append((r1, r2))
    assert mismatches == []


def test_fig5_block_markov_region_strictly_larger(fig5):
    result = compare(project(thm1_system(fig5)), project(thm2_system(fig5)))
    assert result.relation is RegionRelation.A_IN_B
    x, y = result.b_only
    assert isinstance(feasible(thm2_system(fig5), x, y), Witness)
    assert isinstance(feasible(thm1_system(fig5), x, y), FarkasCertificate)


def split_values(sys, alpha):
    values = {name: 0 for name in sys.split_variables("alpha")}
    values.update({split_name("alpha", frozenset(G)): v for G, v in alpha.items()})
    return values


def test_multicast_on_extended_fig3(fig3):
    singles = {(1,): 1, (2,): 1, (3,): 1}
    extended = multicast_system(extend_network(fig3, {frozenset(): 1}))
    assert isinstance(feasible(extended, 0, 3, split_values(extended, singles)), Witness)
    plain = multicast_system(fig3)
    assert isinstance(feasible(plain, 0, 3, split_values(plain, singles)), FarkasCertificate)


def test_multicast_on_extended_fig5(fig5):
    split = {(1, 2, 3): 1, (1, 4): 1, (2, 4): 1, (3, 4): 1}
    extended = multicast_system(extend_network(fig5, {frozenset({4}): 1}))
    assert isinstance(feasible(extended, 1, 4, split_values(extended, split)), Witness)
    # without the extra resource receiver 4 sees only three symbols
    plain = multicast_system(fig5)
    assert isinstance(feasible(plain, 1, 4, split_values(plain, split)), FarkasCertificate)


def test_lp_projection_rejects_shadow_cut_off_at_origin():
    base = LinearSystem(name="cut-corner", m=1, variables=[R1, R2, "x"], constraints=[], groups={})
    sys = base.with_constraints([
        base.row({R1: 1}, Relation.LE, 2, "r1"),
        base.row({R2: 1}, Relation.LE, 2, "r2"),
        base.row({R1: 1, R2: 1}, Relation.GE, 1, "corner"),
        base.row({"x": 1}, Relation.GE, 0, "x-low"),
        base.row({"x": 1}, Relation.LE, 1, "x-high"),
    ])
    assert isinstance(feasible(sys, 0, 0), FarkasCertificate)
    with pytest.raises(SolverError):
        lp_facets(sys)
    with pytest.raises(SolverError):
        project(sys, method="lp")


@pytest.mark.parametrize("builder", [prop1_system, thm1_system, thm2_system])
def test_fig5_shadow_contains_origin_and_intercepts(fig5, builder):
    region = project(builder(fig5), method="lp")
    assert region.contains(0, 0)
    assert region.bounded
