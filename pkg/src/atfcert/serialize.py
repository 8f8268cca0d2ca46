"""Versioned JSON documents for diagrams, packings and capacity reports.

Exact rationals are written as strings ``"p/q"`` (or ``"p"``); integers
that are integers by construction (weights, cut directions, matrices) are
plain JSON numbers.  :func:`dumps` is deterministic: sorted keys, fixed
indentation.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .affine import ConvexPolygon, fmt_q, parse_q
from .atf import BaseDiagram, Corner, check_diagram
from .markov import MarkovError, MarkovTriple
from .packing import (
    CapacityReport,
    DiamondPlacement,
    GluingCertificate,
    Packing,
    TrianglePlacement,
    verify_packing,
)

VERSION = 1


class DocumentError(ValueError):
    """Malformed document; ``path`` locates the offending field."""

    def __init__(self, path: str, msg: str):
        super().__init__(f"{path}: {msg}")
        self.path = path


def _pt(p):
    return [fmt_q(p[0]), fmt_q(p[1])]


def _q(x):
    return fmt_q(Fraction(x))


# --- emit ---------------------------------------------------------------------


def diagram_to_json(d: BaseDiagram) -> dict:
    return {
        "triple": list(d.triple),
        "polygon": d.polygon.to_json(),
        "fiber": _pt(d.fiber),
        "corners": [
            {
                "kind": c.kind,
                "weight": c.weight,
                "cut_direction": list(c.cut_direction) if c.cut_direction else None,
                "node_params": [_q(t) for t in c.node_params],
                "lens_label": list(c.lens_label),
            }
            for c in d.corners
        ],
    }


def placement_to_json(p) -> dict:
    if isinstance(p, TrianglePlacement):
        return {"kind": "triangle", "vertices": [_pt(v) for v in p.vertices], "side": _q(p.side), "base_edge": p.base_edge}
    if isinstance(p, DiamondPlacement):
        return {"kind": "diamond", "psi": [list(r) for r in p.psi], "center": _pt(p.center), "d": _q(p.d)}
    if isinstance(p, GluingCertificate):
        return {
            "kind": "glued",
            "pieces": [Q.to_json() for Q in p.pieces],
            "transitions": [list(t) for t in p.transitions],
            "model": placement_to_json(p.model),
        }
    raise TypeError(f"cannot serialize {type(p).__name__}")


def packing_to_json(p: Packing) -> dict:
    return {
        "name": p.name,
        "diagram": diagram_to_json(p.diagram),
        "excluded": sorted(p.excluded),
        "strict": p.strict,
        "note": p.note,
        "placements": [placement_to_json(x) for x in p.placements],
        "verified": bool(p.verdict()),
    }


def report_to_json(r: CapacityReport) -> dict:
    def val(v):
        if isinstance(v, bool) or v is None:
            return v
        return _q(v)

    return {
        "triple": list(r.triple),
        "entries": [
            {
                "name": e.packing.name,
                "verified": e.verified,
                "affine_size": _q(e.affine_size),
                "capacity_over_pi": _q(e.capacity_over_pi),
                "balls": len(e.packing.placements),
                "reasons": list(e.reasons),
            }
            for e in r.entries
        ],
        "headline": {k: val(v) for k, v in r.headline.items()},
        "external": {k: val(v) for k, v in r.external.items()},
    }


def make_document(d: BaseDiagram, packings=(), report: CapacityReport | None = None, extra: dict | None = None) -> dict:
    doc = {"version": VERSION, **diagram_to_json(d)}
    if packings:
        doc["packings"] = [packing_to_json(p) for p in packings]
    if report is not None:
        doc["report"] = report_to_json(report)
    if extra:
        doc.update(extra)
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


# --- parse --------------------------------------------------------------------


def loads(text: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None


def _get(obj, key, path, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise DocumentError(path, f"missing field {key!r}")
    v = obj[key]
    if kind is not None and not isinstance(v, kind):
        raise DocumentError(f"{path}.{key}", f"expected {kind.__name__ if isinstance(kind, type) else kind}")
    return v


def _parse_pt(v, path):
    if not isinstance(v, list) or len(v) != 2:
        raise DocumentError(path, "expected a pair of rationals")
    try:
        return (parse_q(v[0]), parse_q(v[1]))
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(path, str(exc)) from None


def _parse_poly(v, path):
    if not isinstance(v, list):
        raise DocumentError(path, "expected a vertex list")
    pts = [_parse_pt(p, f"{path}[{i}]") for i, p in enumerate(v)]
    try:
        return ConvexPolygon(pts)
    except ValueError as exc:
        raise DocumentError(path, str(exc)) from None


def diagram_from_json(obj, path="$") -> BaseDiagram:
    trip = _get(obj, "triple", path, list)
    try:
        triple = MarkovTriple(*trip)
    except (TypeError, MarkovError) as exc:
        raise DocumentError(f"{path}.triple", str(exc)) from None
    poly = _parse_poly(_get(obj, "polygon", path), f"{path}.polygon")
    fiber = _parse_pt(_get(obj, "fiber", path), f"{path}.fiber")
    corners = []
    for i, c in enumerate(_get(obj, "corners", path, list)):
        cp = f"{path}.corners[{i}]"
        try:
            direction = c.get("cut_direction")
            corners.append(
                Corner(
                    kind=_get(c, "kind", cp, str),
                    weight=_get(c, "weight", cp, int),
                    cut_direction=tuple(direction) if direction is not None else None,
                    node_params=tuple(parse_q(t) for t in _get(c, "node_params", cp, list)),
                    lens_label=tuple(_get(c, "lens_label", cp, list)),
                )
            )
        except (ValueError, TypeError, AttributeError) as exc:
            raise DocumentError(cp, str(exc)) from None
    try:
        d = BaseDiagram(poly, tuple(corners), fiber, triple)
        check_diagram(d)
    except ValueError as exc:
        raise DocumentError(path, str(exc)) from None
    return d


def placement_from_json(obj, path):
    kind = _get(obj, "kind", path, str)
    try:
        if kind == "triangle":
            verts = tuple(_parse_pt(v, f"{path}.vertices[{i}]") for i, v in enumerate(_get(obj, "vertices", path, list)))
            return TrianglePlacement(verts, parse_q(_get(obj, "side", path)), _get(obj, "base_edge", path, int))
        if kind == "diamond":
            psi = tuple(tuple(r) for r in _get(obj, "psi", path, list))
            return DiamondPlacement(psi, _parse_pt(_get(obj, "center", path), f"{path}.center"), parse_q(_get(obj, "d", path)))
        if kind == "glued":
            pieces = tuple(_parse_poly(p, f"{path}.pieces[{i}]") for i, p in enumerate(_get(obj, "pieces", path, list)))
            trans = tuple(tuple(t) for t in _get(obj, "transitions", path, list))
            model = placement_from_json(_get(obj, "model", path, dict), f"{path}.model")
            return GluingCertificate(pieces, trans, model)
    except DocumentError:
        raise
    except (ValueError, TypeError) as exc:
        raise DocumentError(path, str(exc)) from None
    raise DocumentError(f"{path}.kind", f"unknown placement kind {kind!r}")


def packing_from_json(obj, path) -> Packing:
    d = diagram_from_json(_get(obj, "diagram", path, dict), f"{path}.diagram")
    items = _get(obj, "placements", path, list)
    placements = tuple(placement_from_json(p, f"{path}.placements[{i}]") for i, p in enumerate(items))
    return Packing(
        name=_get(obj, "name", path, str),
        diagram=d,
        placements=placements,
        excluded=frozenset(_get(obj, "excluded", path, list)),
        strict=_get(obj, "strict", path, bool),
        note=obj.get("note", ""),
    )


def parse_document(obj: Any):
    """(diagram, packings) from a parsed JSON document."""
    if not isinstance(obj, dict):
        raise DocumentError("$", "top level must be an object")
    version = obj.get("version")
    if version != VERSION:
        raise DocumentError("$.version", f"unsupported version {version!r}, expected {VERSION}")
    d = diagram_from_json(obj, "$")
    packs = [packing_from_json(p, f"$.packings[{i}]") for i, p in enumerate(obj.get("packings", []))]
    return d, packs


def verify_document(obj: Any) -> list[str]:
    """Re-run every check on a document; returns failure messages (empty when all pass)."""
    _, packs = parse_document(obj)
    problems = []
    for i, p in enumerate(packs):
        v = verify_packing(p.diagram, p.placements, p.excluded, p.strict)
        if not v:
            kind = "malformed" if v.malformed else "failed"
            problems.extend(f"packings[{i}] ({p.name}) {kind}: {msg}" for msg in v.reasons)
        claimed = obj["packings"][i].get("verified")
        if claimed is not None and claimed != bool(v):
            problems.append(f"packings[{i}] ({p.name}) claims verified={claimed}")
    return problems


__all__ = [
    "DocumentError",
    "VERSION",
    "diagram_from_json",
    "diagram_to_json",
    "dumps",
    "loads",
    "make_document",
    "packing_from_json",
    "packing_to_json",
    "parse_document",
    "placement_from_json",
    "placement_to_json",
    "report_to_json",
    "verify_document",
]
