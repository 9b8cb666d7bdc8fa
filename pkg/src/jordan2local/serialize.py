"""JSON forms of ring values, matrices, matrix-valued maps and oracle tables.

Matrices are ``{"ring": "<ring id>", "n": n, "entries": [[...], ...]}`` with
entries as strings (coefficient arrays for polynomial rings).  Maps on a
finite set are ``{"omega": m, "points": [<matrix>, ...]}``.
"""
from __future__ import annotations

import json
from typing import Any

from .derivation import JordanPairDerivation
from .mapalg import OmegaMap
from .matrix import HermitianMatrix, SquareMatrix, ShapeMismatch, is_self_adjoint
from .ring import PolynomialRing, RingId, make_ring, parse_ring_id

__all__ = [
    "value_to_json", "value_from_json", "matrix_to_json", "matrix_from_json",
    "omega_to_json", "omega_from_json", "table_to_json", "table_from_json",
    "dumps", "ParseError",
]


class ParseError(ValueError):
    pass


def value_to_json(ring: RingId, a) -> Any:
    ops = make_ring(ring)
    if isinstance(ops, PolynomialRing):
        return ops.to_json(a)
    return ops.format(a)


def value_from_json(ring: RingId, obj: Any):
    try:
        return make_ring(ring).parse(obj)
    except (ValueError, TypeError) as exc:
        raise ParseError(f"bad {ring} value {obj!r}: {exc}") from None


def matrix_to_json(a: SquareMatrix) -> dict:
    return {
        "ring": str(a.ring),
        "n": a.n,
        "entries": [[value_to_json(a.ring, x) for x in row] for row in a.entries],
    }


def matrix_from_json(obj: Any, ring: RingId | None = None) -> SquareMatrix:
    """Parse a matrix; returns a :class:`HermitianMatrix` when it is self-adjoint."""
    try:
        rid = parse_ring_id(obj["ring"]) if "ring" in obj else ring
        n = int(obj["n"])
        rows = obj["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad matrix object: {exc}") from None
    if rid is None:
        raise ParseError("matrix has no ring")
    if ring is not None and rid != ring:
        raise ParseError(f"matrix ring {rid} where {ring} was expected")
    if n < 1 or len(rows) != n or any(len(r) != n for r in rows):
        raise ParseError(f"entries are not {n} x {n}")
    entries = tuple(tuple(value_from_json(rid, x) for x in row) for row in rows)
    m = SquareMatrix._raw(rid, n, entries)
    return HermitianMatrix._raw(rid, n, entries) if is_self_adjoint(m) else m


def omega_to_json(x: OmegaMap) -> dict:
    return {"omega": x.omega_size, "points": [matrix_to_json(p) for p in x.points]}


def omega_from_json(obj: Any) -> OmegaMap:
    try:
        m = int(obj["omega"])
        pts = [matrix_from_json(p) for p in obj["points"]]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad map object: {exc}") from None
    if len(pts) != m:
        raise ParseError(f"map declares omega={m} but has {len(pts)} points")
    try:
        return OmegaMap(tuple(pts))
    except (ShapeMismatch, ValueError) as exc:
        raise ParseError(str(exc)) from None


def table_to_json(values, witnesses=()) -> dict:
    """``values``: pairs ``(x, dx)``; ``witnesses``: triples ``(x, y, pairs)``."""
    vals = values.items() if hasattr(values, "items") else values
    return {
        "values": [{"x": matrix_to_json(x), "dx": matrix_to_json(dx)} for x, dx in vals],
        "witnesses": [
            {"x": matrix_to_json(x), "y": matrix_to_json(y),
             "pairs": [[matrix_to_json(a), matrix_to_json(b)] for a, b in
                       (w.pairs if isinstance(w, JordanPairDerivation) else w)]}
            for x, y, w in witnesses
        ],
    }


def table_from_json(obj: Any):
    """Returns ``(values, witnesses)``: a list of ``(x, dx)`` and a list of
    ``(x, y, JordanPairDerivation)``."""
    try:
        values = [(matrix_from_json(v["x"]), matrix_from_json(v["dx"])) for v in obj["values"]]
        witnesses = [
            (matrix_from_json(w["x"]), matrix_from_json(w["y"]),
             JordanPairDerivation(tuple((matrix_from_json(a), matrix_from_json(b)) for a, b in w["pairs"])))
            for w in obj.get("witnesses", [])
        ]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad table object: {exc}") from None
    return values, witnesses


def dumps(obj: Any) -> str:
    """Canonical JSON text (sorted keys, fixed separators)."""
    return json.dumps(obj, sort_keys=True, indent=2)
