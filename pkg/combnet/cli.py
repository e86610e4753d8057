"""
combnet - Command Line Front End

This is the main entry point of the combination-network toolkit. A
combination network sends a common message W1 to public receivers 1..m and
W1 plus a private message W2 to receivers m+1..K through unit-capacity
resources, each fanning out to a fixed receiver subset.

The commands compute, check and realize rate pairs (R1, R2) for three coding
schemes:
    - zs: zero-structured linear superposition with a rate split alpha >= 0
    - pre: the same code behind an MDS pre-encoder, so alpha_phi may be negative
    - bm: block Markov coding with virtual resources emulated by next-block symbols

Commands:
    - region: project a scheme's constraints onto (R1, R2); writes half-planes and vertices
    - check: exact feasibility of a rate pair; writes a witness or a Farkas certificate
    - synth: construct a verified code for a rate pair (zs or pre)
    - verify: replay a code file against the network
    - simulate: plan, transmit and backward-decode n blocks of the bm scheme
    - mincut: per-receiver min-cuts, the cut-set box and, with --profile, the
      full-rank test of a zero-structured group profile
    - submod certify: converse certificate for a half-plane of the pre region (m <= 3)
    - compare: compare two scheme regions (or a scheme region and a region file)

Every command prints one JSON status dictionary on stdout. Exit codes:
0 feasible or pass, 1 infeasible or fail, 2 input error, 3 more than four
public receivers. Identical arguments and seed give byte-identical files.
"""

import argparse
import json
import logging
import os
import sys
from typing import Callable, Dict, List, Optional, Tuple

from .block_markov import FLUSH_POLICIES, backward_decode, dump_transcript, plan, simulate
from .codes import build_pre, build_zs, export_code, import_code, scale_to_integer, verify_code
from .config import (
    DEFAULT_SEED,
    CommandConfig,
    Scheme,
    Subcommand,
    apply_env_overrides,
    configure_logging,
    get_default_config,
    parse_halfplane,
    parse_rational,
    resolve_output,
)
from .errors import CombNetError, MalformedArgumentError, MalformedDocumentError
from .network import (
    CombinationNetwork,
    full_rank_feasible,
    load_profile,
    read_network,
    receiver_mincut,
    scale_network,
    unicast_max_flow,
    zero_struct_mincut,
)
from .regions import (
    PROJECTION_METHODS,
    FarkasCertificate,
    RateRegion2D,
    build_system,
    compare,
    cutset_region,
    feasible,
    parse_region,
    project,
)
from .submodularity import fm_converse_certificate, serialize_certificate

logger = logging.getLogger(__name__)

Result = Tuple[Dict, int]


# ============================================================================
# Helpers
# ============================================================================

def _network(config: CommandConfig) -> CombinationNetwork:
    if not config.net:
        raise MalformedArgumentError("--net is required")
    return read_network(config.net)


def _stem(config: CommandConfig) -> str:
    return os.path.splitext(os.path.basename(config.net or "network"))[0]


def _scheme(config: CommandConfig) -> Scheme:
    try:
        return Scheme(config.scheme)
    except ValueError as exc:
        raise MalformedArgumentError(f"unknown scheme {config.scheme!r}") from exc


def _write(path: str, text: str) -> str:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)
    logger.info("Wrote %s", path)
    return path


def _dump_json(data: Dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _region(net: CombinationNetwork, scheme: Scheme, method: str) -> RateRegion2D:
    return project(build_system(scheme.system, net), method=method)


# ============================================================================
# Command Handlers
# ============================================================================

def cmd_region(config: CommandConfig) -> Result:
    """Project the scheme's system; writes '<m1> <m2> <E>' lines and a vertex CSV."""
    net = _network(config)
    scheme = _scheme(config)
    sys_ = build_system(scheme.system, net)
    region = project(sys_, method=config.method)
    path = _write(resolve_output(config.out, f"{_stem(config)}_{scheme.value}.region"), region.export_text())
    payload = {
        "status": "success",
        "scheme": scheme.value,
        "system": sys_.name,
        "variables": len(sys_.variables),
        "constraints": len(sys_.constraints),
        "halfplanes": len(region.halfplanes),
        "region_file": path,
    }
    if region.bounded:
        payload["vertex_file"] = _write(path + ".csv", region.export_vertices_csv())
    return payload, 0


def cmd_check(config: CommandConfig) -> Result:
    """Exit 0 with a witness file when the pair is feasible, exit 1 with a Farkas file otherwise."""
    net = _network(config)
    scheme = _scheme(config)
    sys_ = build_system(scheme.system, net)
    result = feasible(sys_, config.r1, config.r2)
    rates = [str(config.r1), str(config.r2)]
    if isinstance(result, FarkasCertificate):
        path = _write(resolve_output(config.out, f"{_stem(config)}_{scheme.value}_farkas.json"),
                      _dump_json({"rates": rates, "multipliers": result.to_dict(sys_)}))
        return {"status": "success", "feasible": False, "scheme": scheme.value,
                "rows": [label for label, _ in result.rows(sys_)], "certificate_file": path}, 1
    path = _write(resolve_output(config.out, f"{_stem(config)}_{scheme.value}_witness.json"),
                  _dump_json({"rates": rates, "values": result.to_dict()}))
    prefix = "gamma" if scheme is Scheme.BM else "alpha"
    return {"status": "success", "feasible": True, "scheme": scheme.value,
            "split": result.split(sys_, prefix).describe(prefix), "witness_file": path}, 0


def cmd_synth(config: CommandConfig) -> Result:
    """Witness split, denominator scaling and a verified code file."""
    net = _network(config)
    scheme = _scheme(config)
    if scheme is Scheme.BM:
        raise MalformedArgumentError("block-Markov codes are built per run; use 'simulate'")
    sys_ = build_system(scheme.system, net)
    result = feasible(sys_, config.r1, config.r2)
    if isinstance(result, FarkasCertificate):
        return {"status": "error", "error": "infeasible-rate-pair", "scheme": scheme.value,
                "rows": [label for label, _ in result.rows(sys_)]}, 1
    split = dict(result.split(sys_, "alpha").items())
    n, r1, r2, scaled = scale_to_integer(config.r1, config.r2, split)
    target = scale_network(net, n) if n > 1 else net
    build = build_zs if scheme is Scheme.ZS else build_pre
    code = build(target, scaled, int(r1), int(r2), seed=config.seed)
    report = verify_code(code)
    path = _write(resolve_output(config.out, f"{_stem(config)}_{scheme.value}.code"), export_code(code))
    return {"status": "success", "scheme": scheme.value, "uses": n, "code": code.describe(),
            "verification": report.to_dict()["status"], "code_file": path}, 0 if report.passed else 1


def _network_for_code(net: CombinationNetwork, text: str) -> CombinationNetwork:
    """The code's row count tells how many uses of the network one codeword spans."""
    for line in text.splitlines():
        parts = line.split()
        if parts and parts[0] == "A" and len(parts) == 3:
            rows = int(parts[1])
            if rows != net.d and net.d and rows % net.d == 0:
                return scale_network(net, rows // net.d)
            return net
    raise MalformedDocumentError("code file has no 'A <rows> <cols>' header")


def cmd_verify(config: CommandConfig) -> Result:
    net = _network(config)
    if not config.code:
        raise MalformedArgumentError("--code is required")
    with open(config.code, encoding="utf-8") as handle:
        text = handle.read()
    code = import_code(text, _network_for_code(net, text))
    report = verify_code(code)
    payload = {"code": code.describe(), **report.to_dict(), "failing_receivers": report.failing_receivers}
    payload["verification"] = payload.pop("status")
    payload["status"] = "success"
    return payload, 0 if report.passed else 1


def cmd_simulate(config: CommandConfig) -> Result:
    """Plan, transmit config.blocks blocks (flush included) and backward-decode at every receiver."""
    net = _network(config)
    bm_plan = plan(net, config.r1, config.r2, seed=config.seed, flush_policy=config.flush)
    transcript = simulate(bm_plan, config.blocks, seed=config.seed)
    for receiver in bm_plan.net.receivers:
        backward_decode(bm_plan, receiver, transcript)
    path = _write(resolve_output(config.out, f"{_stem(config)}_bm.transcript"), dump_transcript(transcript))
    rates = transcript.effective_rates
    return {
        "status": "success",
        "plan": bm_plan.to_dict(),
        "blocks": transcript.block_count,
        "delivered_common": transcript.delivered_common,
        "delivered_private": transcript.delivered_private,
        "effective_rates": [str(r) for r in rates],
        "decoded": "all receivers",
        "transcript_file": path,
    }, 0


def cmd_mincut(config: CommandConfig) -> Result:
    net = _network(config)
    receivers = [config.receiver] if config.receiver is not None else net.receivers
    cuts = {str(r): receiver_mincut(net, r) for r in receivers}
    payload = {"status": "success", "mincuts": cuts,
               "cutset": [list(map(str, h)) for h in cutset_region(net).halfplanes]}
    passed = True
    if config.profile:
        try:
            with open(config.profile, encoding="utf-8") as handle:
                profile = load_profile(handle.read(), net.m)
        except OSError as exc:
            raise MalformedDocumentError(f"cannot read profile file {config.profile}: {exc}") from exc
        c = profile.total_cols
        full_rank = full_rank_feasible(profile, net.m, c)
        payload["profile"] = {"columns": c, "zero_structured_mincut": zero_struct_mincut(profile, net.m),
                              "max_flow": unicast_max_flow(profile, net.m), "full_rank": full_rank}
        passed = full_rank
    if config.r1 or config.r2:
        inside = cutset_region(net).contains(config.r1, config.r2)
        payload["inside_cutset"] = inside
        passed = passed and inside
    return payload, 0 if passed else 1


def cmd_submod(config: CommandConfig) -> Result:
    """Converse certificate for --halfplane on the pre-encoded region."""
    net = _network(config)
    if config.halfplane is None:
        raise MalformedArgumentError("--halfplane m1,m2,E is required")
    certificate = fm_converse_certificate(net, config.halfplane)
    ok = certificate.verify(net)
    path = _write(resolve_output(config.out, f"{_stem(config)}.cert"), serialize_certificate(certificate))
    return {"status": "success", "replay": "ok" if ok else "failed",
            "certificate": certificate.to_dict(), "certificate_file": path}, 0 if ok else 1


def cmd_compare(config: CommandConfig) -> Result:
    """--against is a second scheme name or a region file."""
    net = _network(config)
    scheme = _scheme(config)
    if not config.against:
        raise MalformedArgumentError("--against is required")
    first = _region(net, scheme, config.method)
    if config.against in {s.value for s in Scheme}:
        second = _region(net, Scheme(config.against), config.method)
    else:
        with open(config.against, encoding="utf-8") as handle:
            second = parse_region(handle.read())
    result = compare(first, second)
    return {"status": "success", "a": scheme.value, "b": config.against, **result.to_dict()}, 0


HANDLERS: Dict[str, Callable[[CommandConfig], Result]] = {
    Subcommand.REGION.value: cmd_region,
    Subcommand.CHECK.value: cmd_check,
    Subcommand.SYNTH.value: cmd_synth,
    Subcommand.VERIFY.value: cmd_verify,
    Subcommand.SIMULATE.value: cmd_simulate,
    Subcommand.MINCUT.value: cmd_mincut,
    Subcommand.SUBMOD.value: cmd_submod,
    Subcommand.COMPARE.value: cmd_compare,
}


# ============================================================================
# Argument Parsing
# ============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="combnet", description="Combination-network rate regions and codes.")
    commands = parser.add_subparsers(dest="subcommand", required=True)

    def add(name: str, help_text: str, rates: bool = False, scheme: bool = True) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument("--net", required=True, help="network document (JSON)")
        if scheme:
            sub.add_argument("--scheme", choices=[s.value for s in Scheme], default=Scheme.PRE.value)
        if rates:
            sub.add_argument("--r1", default="0", help="common rate, exact p/q")
            sub.add_argument("--r2", default="0", help="private rate, exact p/q")
        sub.add_argument("--out", help="output file")
        sub.add_argument("--seed", type=int, help=f"random seed (default {DEFAULT_SEED} or $COMBNET_SEED)")
        sub.add_argument("--verbose", action="store_true")
        return sub

    region = add("region", "project a scheme onto (R1, R2)")
    region.add_argument("--method", choices=PROJECTION_METHODS, default="auto")
    add("check", "feasibility of a rate pair", rates=True)
    add("synth", "construct a code for a rate pair", rates=True)
    verify = add("verify", "verify a code file", scheme=False)
    verify.add_argument("--code", required=True)
    simulate_cmd = add("simulate", "block-Markov transmission", rates=True, scheme=False)
    simulate_cmd.add_argument("--blocks", type=int, default=4, help="blocks including the flush")
    simulate_cmd.add_argument("--flush", choices=FLUSH_POLICIES, default="auto",
                              help="one multicast flush block, or one flush part per virtual symbol")
    mincut = add("mincut", "receiver min-cuts", rates=True, scheme=False)
    mincut.add_argument("--receiver", type=int)
    mincut.add_argument("--profile", help="group profile document (JSON columns/rows per public group)")

    submod = commands.add_parser("submod", help="submodularity certificates")
    actions = submod.add_subparsers(dest="action", required=True)
    certify = actions.add_parser("certify", help="converse certificate for a half-plane")
    certify.add_argument("--net", required=True)
    certify.add_argument("--halfplane", required=True, help="m1,m2,E")
    certify.add_argument("--out")
    certify.add_argument("--seed", type=int)
    certify.add_argument("--verbose", action="store_true")

    compare_cmd = add("compare", "compare two regions")
    compare_cmd.add_argument("--against", required=True, help="scheme name or region file")
    compare_cmd.add_argument("--method", choices=PROJECTION_METHODS, default="auto")
    return parser


def config_from_args(args: argparse.Namespace) -> CommandConfig:
    data = get_default_config(args.subcommand, args.net)
    for key in ("scheme", "out", "blocks", "method", "code", "against", "receiver", "profile", "flush", "verbose"):
        value = getattr(args, key, None)
        if value is not None:
            data[key] = value
    if getattr(args, "seed", None) is not None:
        data["seed"] = args.seed
    data = apply_env_overrides(data, seed_given=getattr(args, "seed", None) is not None)
    for key in ("r1", "r2"):
        data[key] = parse_rational(getattr(args, key, "0"))
    halfplane = getattr(args, "halfplane", None)
    data["halfplane"] = parse_halfplane(halfplane) if halfplane else None
    return CommandConfig.from_dict(data)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        config = config_from_args(args)
        logger.debug("Config: %s", config.to_dict())
        payload, code = HANDLERS[config.subcommand](config)
    except CombNetError as exc:
        logger.error("%s failed: %s", args.subcommand, exc)
        payload, code = exc.to_dict(), exc.exit_code
    except OSError as exc:
        payload, code = {"status": "error", "error": "malformed-document", "message": str(exc)}, 2
    print(json.dumps(payload, indent=2, sort_keys=True))
    return code


if __name__ == "__main__":
    sys.exit(main())
