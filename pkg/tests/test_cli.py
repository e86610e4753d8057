import json
from fractions import Fraction
from pathlib import Path

import pytest

from combnet.cli import build_parser, config_from_args, main
from combnet.config import (
    DEFAULT_SEED,
    ENV_OUTPUT_DIR,
    ENV_SEED,
    CommandConfig,
    Scheme,
    parse_halfplane,
    parse_rational,
    resolve_output,
)
from combnet.errors import MalformedArgumentError
from combnet.regions.systems import Scheme as SystemScheme

NETWORKS = Path(__file__).resolve().parent.parent / "networks"


def network_path(name):
    return str(NETWORKS / f"{name}.net")


def run(capsys, *argv):
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


def test_parse_rational():
    assert parse_rational("3/2") == Fraction(3, 2)
    assert parse_rational("1.5") == Fraction(3, 2)
    assert parse_rational(" 2 ") == 2
    for bad in ("-1", "x", "1/0"):
        with pytest.raises(MalformedArgumentError):
            parse_rational(bad)


def test_parse_halfplane():
    assert parse_halfplane("4,2,7") == (4, 2, 7)
    assert parse_halfplane("4 2 7") == (4, 2, 7)
    for bad in ("4,2", "a,b,c", "0,0,1", "-1,2,3"):
        with pytest.raises(MalformedArgumentError):
            parse_halfplane(bad)


def test_scheme_systems():
    assert Scheme("zs").system is SystemScheme.PROP1
    assert Scheme.BM.system is SystemScheme.THM2


def test_config_roundtrip_keeps_rationals():
    config = CommandConfig(subcommand="check", net="a.net", r1=Fraction(1, 3), halfplane=(4, 2, 7))
    data = config.to_dict()
    assert data["r1"] == "1/3" and data["halfplane"] == [4, 2, 7]
    assert CommandConfig.from_dict({**data, "unknown": 1}) == config


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv(ENV_SEED, "11")
    args = build_parser().parse_args(["check", "--net", "x.net", "--r1", "1/2"])
    config = config_from_args(args)
    assert config.seed == 11 and config.r1 == Fraction(1, 2)
    args = build_parser().parse_args(["check", "--net", "x.net", "--seed", "3"])
    assert config_from_args(args).seed == 3
    monkeypatch.delenv(ENV_SEED)
    assert config_from_args(build_parser().parse_args(["check", "--net", "x.net"])).seed == DEFAULT_SEED


def test_output_dir_from_environment(monkeypatch, tmp_path):
    monkeypatch.setenv(ENV_OUTPUT_DIR, str(tmp_path / "out"))
    assert resolve_output(None, "a.region") == str(tmp_path / "out" / "a.region")
    assert resolve_output("/abs/b.region", "a.region") == "/abs/b.region"


def test_check_exit_codes(capsys, tmp_path):
    code, payload = run(capsys, "check", "--net", network_path("fig3"), "--scheme", "zs",
                        "--r1", "0", "--r2", "2", "--out", str(tmp_path / "zs.json"))
    assert code == 1 and payload["feasible"] is False
    assert json.loads((tmp_path / "zs.json").read_text())["rates"] == ["0", "2"]

    code, payload = run(capsys, "check", "--net", network_path("fig3"), "--scheme", "pre",
                        "--r1", "0", "--r2", "2", "--out", str(tmp_path / "pre.json"))
    assert code == 0 and payload["feasible"] is True


def test_region_writes_halfplanes(capsys, tmp_path):
    out = tmp_path / "fig7.region"
    code, payload = run(capsys, "region", "--net", network_path("fig7"), "--scheme", "zs", "--out", str(out))
    assert code == 0
    assert payload["halfplanes"] == 3
    assert out.read_text() == "1 0 2\n1 1 4\n2 1 5\n"
    assert (tmp_path / "fig7.region.csv").exists()


def test_region_file_is_deterministic(capsys, tmp_path):
    for name in ("a", "b"):
        run(capsys, "region", "--net", network_path("fig8"), "--out", str(tmp_path / name))
    assert (tmp_path / "a").read_text() == (tmp_path / "b").read_text()


def test_synth_then_verify(capsys, tmp_path):
    code_file = tmp_path / "fig2.code"
    code, payload = run(capsys, "synth", "--net", network_path("fig2"), "--scheme", "zs",
                        "--r1", "1", "--r2", "2", "--out", str(code_file))
    assert code == 0 and payload["verification"] == "pass"
    code, payload = run(capsys, "verify", "--net", network_path("fig2"), "--code", str(code_file))
    assert code == 0
    assert payload["verification"] == "pass"
    assert payload["failing_receivers"] == []


def test_synth_rejects_infeasible_pair(capsys, tmp_path):
    code, payload = run(capsys, "synth", "--net", network_path("fig3"), "--scheme", "zs",
                        "--r1", "0", "--r2", "2", "--out", str(tmp_path / "x.code"))
    assert code == 1 and payload["error"] == "infeasible-rate-pair"


def test_simulate_fig5(capsys, tmp_path):
    out = tmp_path / "fig5.transcript"
    code, payload = run(capsys, "simulate", "--net", network_path("fig5"), "--r1", "1", "--r2", "3",
                        "--blocks", "6", "--out", str(out))
    assert code == 0
    assert payload["delivered_common"] == 5
    assert payload["delivered_private"] == 16
    assert payload["effective_rates"] == ["5/6", "8/3"]
    assert "block 6 (flush)" in out.read_text()


def test_submod_certify_fig8(capsys, tmp_path):
    out = tmp_path / "fig8.cert"
    code, payload = run(capsys, "submod", "certify", "--net", network_path("fig8"),
                        "--halfplane", "4,2,7", "--out", str(out))
    assert code == 0 and payload["replay"] == "ok"
    assert out.read_text().startswith("m 3\nhalfplane 4 2 7\n")


def test_compare_schemes_and_files(capsys, tmp_path):
    code, payload = run(capsys, "compare", "--net", network_path("fig8"), "--scheme", "pre", "--against", "bm")
    assert code == 0 and payload["relation"] == "equal"

    region_file = tmp_path / "fig3_zs.region"
    run(capsys, "region", "--net", network_path("fig3"), "--scheme", "zs", "--out", str(region_file))
    code, payload = run(capsys, "compare", "--net", network_path("fig3"), "--scheme", "pre",
                        "--against", str(region_file))
    assert code == 0 and payload["relation"] == "B⊂A"


def test_mincut(capsys):
    code, payload = run(capsys, "mincut", "--net", network_path("fig7"))
    assert code == 0 and payload["mincuts"] == {"1": 2, "2": 3, "3": 4}
    code, payload = run(capsys, "mincut", "--net", network_path("fig7"), "--r1", "3", "--r2", "0")
    assert code == 1 and payload["inside_cutset"] is False


def test_input_errors(capsys, tmp_path):
    code, payload = run(capsys, "region", "--net", str(tmp_path / "missing.net"))
    assert code == 2
    bad = tmp_path / "bad.net"
    bad.write_text("{\"public_receivers\": 2}")
    code, payload = run(capsys, "region", "--net", str(bad))
    assert code == 2 and payload["error"] == "malformed-document"
    code, payload = run(capsys, "check", "--net", network_path("fig3"), "--r1", "-1")
    assert code == 2 and payload["error"] == "malformed-argument"


def test_too_many_public_receivers(capsys, tmp_path):
    doc = tmp_path / "m5.net"
    doc.write_text(json.dumps({"public_receivers": 5, "private_receivers": 1,
                               "resources": [{"public": [1], "privates": [6]}]}))
    code, payload = run(capsys, "region", "--net", str(doc))
    assert code == 3 and payload["error"] == "m-too-large"


def test_mincut_group_profile(capsys, tmp_path):
    profile = tmp_path / "full.json"
    profile.write_text(json.dumps({"columns": {"{1,2}": 1, "{1}": 1}, "rows": {"{1}": 2}}))
    code, payload = run(capsys, "mincut", "--net", network_path("fig7"), "--profile", str(profile))
    assert code == 0
    assert payload["profile"] == {"columns": 2, "zero_structured_mincut": 2, "max_flow": 2, "full_rank": True}

    profile.write_text(json.dumps({"columns": {"{2}": 1}, "rows": {"{1}": 1}}))
    code, payload = run(capsys, "mincut", "--net", network_path("fig7"), "--profile", str(profile))
    assert code == 1 and payload["profile"]["full_rank"] is False

    profile.write_text(json.dumps({"columns": {"{3}": 1}}))
    code, payload = run(capsys, "mincut", "--net", network_path("fig7"), "--profile", str(profile))
    assert code == 2 and payload["error"] == "receiver-index-out-of-range"


def test_simulate_per_symbol_flush(capsys, tmp_path):
    out = tmp_path / "fig3.transcript"
    code, payload = run(capsys, "simulate", "--net", network_path("fig3"), "--r1", "0", "--r2", "2",
                        "--flush", "per-symbol", "--out", str(out))
    assert code == 0
    assert payload["plan"]["flush_per_symbol"] is True
    assert payload["blocks"] == 4
    assert "block 4 (flush) part 1" in out.read_text()
