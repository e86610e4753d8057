import pytest

from combnet.errors import CertificateNotFoundError, MalformedArgumentError, MalformedDocumentError, PreconditionViolatedError
from combnet.regions.systems import family_label
from combnet.submodularity import (
    canonical,
    converse_from_multipliers,
    converse_rows,
    existing_groups,
    family,
    fm_converse_certificate,
    multifamily,
    parse_certificate,
    serialize_certificate,
    stars,
)


def _private(fam, p):
    return f"private[{family_label(fam)}|{p}]"


def _positivity(fam):
    return f"positivity[{family_label(fam)}]"


@pytest.fixture
def fig8_multipliers():
    return {
        "public[1]": 2,
        "public[2]": 1,
        "public[3]": 1,
        _private(stars(3, {1}, {2, 3}), 4): 1,
        _private(stars(3, {1}, {2}, {3}), 5): 1,
        _positivity(stars(3, {1, 2, 3})): 1,
    }


def test_rows_and_groups(fig8):
    rows = converse_rows(fig8)
    kinds = [row.kind for row in rows]
    assert kinds.count("public") == 3
    assert kinds.count("private") == 38
    assert kinds.count("cut") == 2
    assert kinds.count("positivity") == 18
    assert existing_groups(fig8) == family({1}, {2}, {3}, {2, 3})
    by_label = {row.label: row for row in rows}
    assert by_label["public[2]"].rhs == 2
    assert by_label[_private(stars(3, {1}, {2, 3}), 4)].rhs == 1
    assert by_label["cut[5]"].rhs == 3


def test_fig8_hand_multipliers(fig8, fig8_multipliers):
    cert = converse_from_multipliers(fig8, (4, 2, 7), fig8_multipliers)
    assert cert.scale == 1
    assert cert.ground == family({1}, {2}, {3}, {2, 3})
    assert cert.verify(fig8)
    assert canonical(cert.compression.start) == canonical(multifamily([[{1}], [{1}], [{2}, {2, 3}], [{3}, {2, 3}]]))
    assert canonical(cert.compression.end) == canonical(multifamily([[{1}, {2, 3}], [{1}, {2}, {3}, {2, 3}]]))
    edges = cert.compression.edge_counts()
    assert edges[0] == 5 and edges[-1] == 0


def test_fig8_projected_halfplane(fig8):
    cert = fm_converse_certificate(fig8, (4, 2, 7))
    assert cert.halfplane == (4, 2, 7)
    assert cert.verify(fig8)


def test_fig7_corner_halfplane(fig7):
    multipliers = {
        "public[1]": 1,
        "public[2]": 1,
        _private(stars(2, {1}, {2}), 3): 1,
        _positivity(stars(2, {1, 2})): 1,
    }
    cert = converse_from_multipliers(fig7, (2, 1, 5), multipliers)
    assert cert.ground is None
    assert len(cert.compression.steps) == 1
    assert cert.verify(fig7)
    assert fm_converse_certificate(fig7, (2, 1, 5)).verify(fig7)


def test_cut_needs_no_compression(fig7):
    cert = fm_converse_certificate(fig7, (1, 1, 4))
    assert cert.compression.steps == ()
    assert cert.verify(fig7)
    assert cert.to_dict()["copies"] == 1


def test_halfplane_inside_the_region_has_no_converse(fig7):
    with pytest.raises(CertificateNotFoundError):
        fm_converse_certificate(fig7, (1, 1, 3))


def test_bad_multipliers(fig7):
    with pytest.raises(CertificateNotFoundError):
        converse_from_multipliers(fig7, (1, 1, 4), {"cut[9]": 1})
    with pytest.raises(CertificateNotFoundError):
        converse_from_multipliers(fig7, (1, 1, 4), {"public[1]": 1})
    with pytest.raises(CertificateNotFoundError):
        converse_from_multipliers(fig7, (1, 1, 3), {"cut[3]": 1})


def test_preconditions(fig5, fig7):
    with pytest.raises(PreconditionViolatedError):
        fm_converse_certificate(fig5, (1, 1, 4))
    with pytest.raises(MalformedArgumentError):
        fm_converse_certificate(fig7, (0, 0, 1))


def test_certificate_text(fig8, fig8_multipliers):
    cert = converse_from_multipliers(fig8, (4, 2, 7), fig8_multipliers)
    text = serialize_certificate(cert)
    assert text.startswith("m 3\nhalfplane 4 2 7\ncopies 1\n")
    assert "ground 1,2,4,6\n" in text
    parsed = parse_certificate(text, fig8)
    assert parsed.multipliers == cert.multipliers
    assert parsed.verify(fig8)

    assert not parse_certificate(text.replace("copies 1", "copies 2"), fig8).verify(fig8)
    with pytest.raises(CertificateNotFoundError):
        parse_certificate(text.replace("row public[1] 2", "row public[1] 3"), fig8)


def test_malformed_certificate_text(fig7, fig8, fig8_multipliers):
    text = serialize_certificate(converse_from_multipliers(fig8, (4, 2, 7), fig8_multipliers))
    with pytest.raises(MalformedDocumentError):
        parse_certificate(text, fig7)
    with pytest.raises(MalformedDocumentError):
        parse_certificate(text.split("steps")[0], fig8)
    with pytest.raises(MalformedDocumentError):
        parse_certificate(text.replace("copies 1", "copies one"), fig8)
