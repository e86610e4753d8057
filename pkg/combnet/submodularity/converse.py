"""
Converse certificates for projected half-planes.

A half-plane m1*R1 + m2*R2 <= E of the pre-encoded region is a non-negative
combination of public, private, cut and positivity rows in which every
split variable of an existing resource group cancels. Read as entropy
inequalities, the public rows contribute the standard multifamily Gamma and
the private and positivity rows the saturated multifamily Lambda; the
half-plane is a valid outer bound once Gamma is shown to compress to Lambda.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Dict, List, Mapping, Optional, Tuple

from ..errors import CertificateNotFoundError, MalformedDocumentError, PreconditionViolatedError
from ..network.families import saturated_families
from ..network.model import EMPTY, CombinationNetwork, SetFamily, Subset, group_counts, power_set
from ..regions.feasibility import optimize
from ..regions.region import normalize_halfplane
from ..regions.simplex import LPStatus
from ..regions.systems import LinearSystem, Relation, family_label
from .decompression import CompressionCertificate, decompress_to_standard
from .multifamily import Ground, MultiFamily, canonical, restrict, star

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConverseRow:
    """coeff_R1*R1 + coeff_R2*R2 + sum alpha coefficients <= rhs, with its entropy family."""
    kind: str
    label: str
    r1: int
    r2: int
    alpha: Tuple[Tuple[Subset, int], ...]
    rhs: int
    family: Optional[SetFamily] = None


def converse_rows(net: CombinationNetwork) -> List[ConverseRow]:
    """Outer-bound rows over alpha_S, S non-empty (alpha_phi substituted through R2 = sum alpha)."""
    E, Ep = group_counts(net)
    m = net.m
    groups = power_set(m)
    rows: List[ConverseRow] = []
    for i in net.public_receivers:
        fam = star({i}, m)
        rows.append(ConverseRow("public", f"public[{i}]", 1, 0, tuple((S, 1) for S in sorted(fam, key=sorted)),
                                sum(E[S] for S in fam), fam))
    for fam in saturated_families(m):
        if EMPTY in fam:
            continue
        for p in net.private_receivers:
            rows.append(ConverseRow("private", f"private[{family_label(fam)}|{p}]", 0, 1,
                                    tuple((S, -1) for S in sorted(fam, key=sorted)),
                                    sum(Ep[(S, p)] for S in groups if S not in fam), fam))
    for p in net.private_receivers:
        rows.append(ConverseRow("cut", f"cut[{p}]", 1, 1, (), sum(Ep[(S, p)] for S in groups)))
    for fam in saturated_families(m):
        if fam and EMPTY not in fam:
            rows.append(ConverseRow("positivity", f"positivity[{family_label(fam)}]", 0, 0,
                                    tuple((S, -1) for S in sorted(fam, key=sorted)), 0, fam))
    return rows


def existing_groups(net: CombinationNetwork) -> SetFamily:
    """Non-empty public sets that at least one resource has."""
    E, _ = group_counts(net)
    return frozenset(S for S, count in E.items() if count and S)


@dataclass
class ConverseCertificate:
    """Integer multipliers for k copies of a half-plane plus the compression behind them."""
    halfplane: Tuple[int, int, int]
    scale: int
    multipliers: Dict[str, int]
    gamma: MultiFamily
    lam: MultiFamily
    ground: Ground
    compression: CompressionCertificate

    def verify(self, net: CombinationNetwork) -> bool:
        try:
            replayed = _combine(net, self.halfplane, self.multipliers)
        except CertificateNotFoundError:
            return False
        scale, gamma, lam, ground = replayed
        if scale != self.scale or not self.compression.verify():
            return False
        return (canonical(self.compression.start) == canonical(restrict(gamma, ground))
                and canonical(self.compression.end) == canonical(restrict(lam, ground)))

    def to_dict(self) -> Dict[str, object]:
        return {
            "halfplane": list(self.halfplane),
            "copies": self.scale,
            "multipliers": dict(self.multipliers),
            "ground": "all" if self.ground is None else len(self.ground),
            "compression": self.compression.to_dict(),
        }


def _combine(net: CombinationNetwork, halfplane: Tuple[int, int, int], multipliers: Mapping[str, int]):
    """
    Check a multiplier list against the half-plane.

    Returns:
        (k, Gamma, Lambda, ground): the list yields k copies of the half-plane;
        ground is None when the split variables cancel everywhere, else the
        existing groups
    """
    rows = {row.label: row for row in converse_rows(net)}
    unknown = [label for label in multipliers if label not in rows]
    if unknown:
        raise CertificateNotFoundError(f"unknown converse rows {unknown}")
    if any(count < 0 for count in multipliers.values()):
        raise CertificateNotFoundError("multipliers must be non-negative")
    m1, m2, E = halfplane
    r1 = sum(rows[label].r1 * count for label, count in multipliers.items())
    r2 = sum(rows[label].r2 * count for label, count in multipliers.items())
    rhs = sum(rows[label].rhs * count for label, count in multipliers.items())
    if m1:
        k = Fraction(r1, m1)
    else:
        k = Fraction(r2, m2)
    if k <= 0 or r1 != k * m1 or r2 != k * m2 or k.denominator != 1:
        raise CertificateNotFoundError(f"rows combine to {r1}*R1 + {r2}*R2, not a multiple of ({m1}, {m2})")
    if rhs > k * E:
        raise CertificateNotFoundError(f"rows give right-hand side {rhs} > {k * E}")

    residual: Dict[Subset, int] = {}
    for label, count in multipliers.items():
        for S, coeff in rows[label].alpha:
            residual[S] = residual.get(S, 0) + coeff * count
    ground = existing_groups(net)
    for S, value in residual.items():
        if (S in ground and value != 0) or value < 0:
            raise CertificateNotFoundError(f"split variable of {sorted(S)} does not cancel (coefficient {value})")

    gamma: List[SetFamily] = []
    lam: List[SetFamily] = []
    for label, count in sorted(multipliers.items()):
        row = rows[label]
        if row.family is None:
            continue
        (gamma if row.kind == "public" else lam).extend([row.family] * count)
    full = all(value == 0 for value in residual.values())
    return int(k), tuple(gamma), tuple(lam), None if full else ground


def converse_from_multipliers(net: CombinationNetwork, halfplane, multipliers: Mapping[str, int]) -> ConverseCertificate:
    """Replay a multiplier list and find the compression that makes it an outer bound."""
    if net.m not in (2, 3):
        raise PreconditionViolatedError(f"converse certificates need m in (2, 3), got m={net.m}")
    halfplane = normalize_halfplane(*halfplane)
    multipliers = {label: int(count) for label, count in multipliers.items() if count}
    k, gamma, lam, ground = _combine(net, halfplane, multipliers)
    if gamma or lam:
        compression = decompress_to_standard(lam, gamma, net.m, ground)
    else:
        compression = CompressionCertificate(net.m, (), (), (), ground)
    logger.info("Converse for %s: %d copies, %d compression steps", halfplane, k, len(compression.steps))
    return ConverseCertificate(halfplane, k, multipliers, gamma, lam, ground, compression)


def _multiplier_system(net: CombinationNetwork, halfplane: Tuple[int, int, int]):
    rows = converse_rows(net)
    names = [row.label for row in rows]
    sys = LinearSystem(name="converse", m=net.m, variables=names, constraints=[])
    m1, m2, _ = halfplane
    cons = [sys.row({name: 1}, Relation.GE, 0, f"nonneg[{name}]") for name in names]
    cons.append(sys.row({row.label: row.r1 for row in rows if row.r1}, Relation.EQ, m1, "R1"))
    cons.append(sys.row({row.label: row.r2 for row in rows if row.r2}, Relation.EQ, m2, "R2"))
    ground = existing_groups(net)
    residual: Dict[Subset, Dict[str, int]] = {S: {} for S in power_set(net.m) if S}
    for row in rows:
        for S, coeff in row.alpha:
            residual[S][row.label] = coeff
    for S, terms in residual.items():
        cons.append(sys.row(terms, Relation.EQ if S in ground else Relation.GE, 0, f"residual[{sorted(S)}]"))
    sys.constraints.extend(cons)
    return sys, rows, residual, ground


def fm_converse_certificate(net: CombinationNetwork, halfplane) -> ConverseCertificate:
    """
    Multipliers and compression for a projected half-plane.

    The multiplier LP first minimizes the right-hand side (which must not
    exceed E), then the leftover split coefficients on missing groups, then
    the positivity weight; the vertex found is scaled to integers.

    Raises:
        CertificateNotFoundError: no combination reaches the half-plane
    """
    if net.m not in (2, 3):
        raise PreconditionViolatedError(f"converse certificates need m in (2, 3), got m={net.m}")
    halfplane = normalize_halfplane(*halfplane)
    sys, rows, residual, ground = _multiplier_system(net, halfplane)

    stages = [
        ("rhs", {row.label: row.rhs for row in rows if row.rhs}),
        ("residual", {}),
        ("positivity", {row.label: 1 for row in rows if row.kind == "positivity"}),
    ]
    for S, terms in residual.items():
        if S not in ground:
            for label, coeff in terms.items():
                stages[1][1][label] = stages[1][1].get(label, 0) + coeff

    best = None
    for stage, objective in stages:
        if not objective:
            continue
        best = optimize(sys, objective, maximize=False)
        if best.status is not LPStatus.OPTIMAL:
            raise CertificateNotFoundError(f"multiplier LP {stage} stage ended {best.status.value}")
        if stage == "rhs" and best.value > halfplane[2]:
            raise CertificateNotFoundError(
                f"best combination gives {best.value}, the half-plane needs {halfplane[2]}")
        sys = sys.with_constraints([sys.row(objective, Relation.LE, best.value, f"stage[{stage}]")])
    if best is None:
        best = optimize(sys, {}, maximize=False)

    values = {name: v for name, v in best.values.items() if v}
    k = reduce(lambda acc, v: acc * v.denominator // math.gcd(acc, v.denominator), values.values(), 1)
    multipliers = {name: int(v * k) for name, v in values.items()}
    logger.info("Multipliers for %s: %s", halfplane, multipliers)
    return converse_from_multipliers(net, halfplane, multipliers)


# ============================================================================
# Text format
# ============================================================================

def _mask(S: Subset) -> int:
    return sum(1 << (i - 1) for i in S)


def _unmask(mask: int) -> Subset:
    return frozenset(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def _family_line(F: SetFamily) -> str:
    return ",".join(str(mask) for mask in sorted(_mask(S) for S in F)) or "-"


def _parse_family(line: str) -> SetFamily:
    if line.strip() == "-":
        return frozenset()
    return frozenset(_unmask(int(token)) for token in line.split(","))


def serialize_certificate(cert: ConverseCertificate) -> str:
    """
    Line format: subsets are bitmasks (receiver i is bit i-1), families are
    comma-separated masks with "-" for the empty family.
    """
    comp = cert.compression
    lines = [
        f"m {comp.m}",
        "halfplane " + " ".join(str(v) for v in cert.halfplane),
        f"copies {cert.scale}",
    ]
    lines += [f"row {label} {count}" for label, count in sorted(cert.multipliers.items())]
    lines.append("ground " + ("all" if cert.ground is None else _family_line(cert.ground)))
    lines.append(f"start {len(comp.start)}")
    lines += [_family_line(F) for F in comp.start]
    lines.append("steps " + " ".join(f"{i},{j}" for i, j in comp.steps))
    lines.append(f"end {len(comp.end)}")
    lines += [_family_line(F) for F in comp.end]
    return "\n".join(lines) + "\n"


def parse_certificate(text: str, net: CombinationNetwork) -> ConverseCertificate:
    """Read a certificate back; Gamma and Lambda are rebuilt from the rows on ``net``."""
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    pos = 0

    def take(keyword: str) -> str:
        nonlocal pos
        if pos >= len(lines) or not lines[pos].startswith(keyword):
            raise MalformedDocumentError(f"certificate line {pos + 1}: expected '{keyword}'")
        value = lines[pos][len(keyword):].strip()
        pos += 1
        return value

    def families(count: int) -> MultiFamily:
        nonlocal pos
        if pos + count > len(lines):
            raise MalformedDocumentError("certificate ends inside a multifamily")
        out = tuple(_parse_family(line) for line in lines[pos:pos + count])
        pos += count
        return out

    try:
        m = int(take("m"))
        halfplane = tuple(int(v) for v in take("halfplane").split())
        scale = int(take("copies"))
        multipliers: Dict[str, int] = {}
        while pos < len(lines) and lines[pos].startswith("row "):
            label, count = take("row").rsplit(" ", 1)
            multipliers[label] = int(count)
        ground_text = take("ground")
        ground = None if ground_text == "all" else _parse_family(ground_text)
        start = families(int(take("start")))
        steps = tuple(tuple(int(v) for v in token.split(",")) for token in take("steps").split())
        end = families(int(take("end")))
    except ValueError as exc:
        raise MalformedDocumentError(f"certificate line {pos + 1}: {exc}") from exc
    if len(halfplane) != 3:
        raise MalformedDocumentError("halfplane needs three integers")
    if m != net.m:
        raise MalformedDocumentError(f"certificate is for m={m}, network has m={net.m}")

    _, gamma, lam, _ = _combine(net, halfplane, multipliers)
    compression = CompressionCertificate(m, start, steps, end, ground)
    return ConverseCertificate(halfplane, scale, multipliers, gamma, lam, ground, compression)
