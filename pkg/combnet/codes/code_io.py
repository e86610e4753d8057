"""
Plain-text code dump.

    q 5
    rates 1 2
    multicast 0
    split {2}:1 {}:1
    resource_order 0 1 2 3
    A 4 3
    1 1 0
    ...
    mask 4 3
    ...
    P 0 0

Every matrix is a header "<name> <rows> <cols>" followed by its rows.
"""

import logging
from typing import Dict, Iterator, List, Tuple

import numpy as np

from ..errors import MalformedDocumentError
from ..field.gf import as_matrix
from ..network.model import CombinationNetwork, Subset, format_subset, power_set
from .code import ColumnLayout, ZeroStructuredCode

logger = logging.getLogger(__name__)


def _matrix_lines(name: str, M) -> List[str]:
    raw = np.asarray(M).view(np.ndarray).astype(np.int64)
    rows, cols = raw.shape if raw.ndim == 2 else (0, 0)
    return [f"{name} {rows} {cols}"] + [" ".join(str(int(v)) for v in row) for row in raw]


def export_code(code: ZeroStructuredCode) -> str:
    split = " ".join(f"{format_subset(S)}:{code.split.get(S, 0)}" for S in power_set(code.net.m))
    lines = [
        f"q {code.q}",
        f"rates {code.R1} {code.R2}",
        f"multicast {int(code.multicast)}",
        f"split {split}",
        "resource_order " + " ".join(str(e) for e in code.resource_order),
    ]
    lines += _matrix_lines("A", code.A)
    lines += _matrix_lines("mask", code.mask.astype(np.int64))
    lines += _matrix_lines("P", code.pre_encoder) if code.pre_encoder is not None else ["P 0 0"]
    return "\n".join(lines) + "\n"


def _parse_subset(text: str) -> Subset:
    inner = text.strip()
    if not (inner.startswith("{") and inner.endswith("}")):
        raise MalformedDocumentError(f"bad subset {text!r}")
    body = inner[1:-1]
    return frozenset(int(v) for v in body.split(",")) if body else frozenset()


def _read_matrix(lines: Iterator[str], name: str) -> Tuple[int, int, List[List[int]]]:
    header = next(lines, "").split()
    if len(header) != 3 or header[0] != name:
        raise MalformedDocumentError(f"expected '{name} <rows> <cols>' header, got {' '.join(header)!r}")
    rows, cols = int(header[1]), int(header[2])
    body: List[List[int]] = []
    for _ in range(rows):
        if not cols:
            body.append([])
            continue
        values = [int(v) for v in next(lines, "").split()]
        if len(values) != cols:
            raise MalformedDocumentError(f"{name}: row of length {len(values)}, expected {cols}")
        body.append(values)
    return rows, cols, body


def import_code(text: str, net: CombinationNetwork) -> ZeroStructuredCode:
    """Inverse of export_code; the network supplies receivers and resources."""
    lines = iter(line.strip() for line in text.splitlines() if line.strip())
    fields: Dict[str, List[str]] = {}
    try:
        for key in ("q", "rates", "multicast", "split", "resource_order"):
            parts = next(lines).split()
            if parts[0] != key:
                raise MalformedDocumentError(f"expected field {key!r}, got {parts[0]!r}")
            fields[key] = parts[1:]
        q = int(fields["q"][0])
        R1, R2 = (int(v) for v in fields["rates"])
        split = {}
        for item in fields["split"]:
            subset, _, value = item.rpartition(":")
            split[_parse_subset(subset)] = int(value)
        d, width, A = _read_matrix(lines, "A")
        _, _, mask = _read_matrix(lines, "mask")
        p_rows, p_cols, P = _read_matrix(lines, "P")
    except (StopIteration, ValueError) as exc:
        raise MalformedDocumentError(f"truncated or malformed code dump: {exc}") from exc

    if d != net.d:
        raise MalformedDocumentError(f"code has {d} rows but the network has {net.d} resources")
    layout = ColumnLayout.from_split(net.m, R1, split)
    if width != layout.width:
        raise MalformedDocumentError(f"code has {width} columns but its split needs {layout.width}")
    return ZeroStructuredCode(
        net=net, q=q, R1=R1, R2=R2, split=split,
        A=as_matrix(A, q, cols=width),
        mask=np.array(mask, dtype=bool).reshape(d, width),
        pre_encoder=as_matrix(P, q, cols=p_cols) if p_rows else None,
        multicast=fields["multicast"] == ["1"],
        resource_order=tuple(int(e) for e in fields["resource_order"]),
    )
