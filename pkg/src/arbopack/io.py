"""JSON documents for instances, packings and reports."""

from __future__ import annotations

import json
from typing import Any

from .hypergraph import Dyperedge, Hyperedge, MixedHypergraph, RootBounds
from .packing import (
    Arborescence,
    DualSet,
    FgViolation,
    GpcViolation,
    Packing,
    SubpartitionF,
    SubpartitionG,
    TrimmedEdge,
)

__all__ = [
    "DocumentError",
    "dumps",
    "instance_from_doc",
    "instance_to_doc",
    "load_instance",
    "packing_from_doc",
    "packing_to_doc",
    "load_packing",
    "certificate_to_doc",
    "certificate_from_doc",
]


class DocumentError(ValueError):
    pass


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _keys(obj: Any, where: str, required: set, optional: set = frozenset()) -> dict:
    if not isinstance(obj, dict):
        raise DocumentError(f"{where}: expected an object")
    unknown = set(obj) - required - optional
    if unknown:
        raise DocumentError(f"{where}: unknown field(s) {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise DocumentError(f"{where}: missing field(s) {sorted(missing)}")
    return obj


def _number(x: Any, where: str):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise DocumentError(f"{where}: expected a number, got {x!r}")
    return x


def _integer(x: Any, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise DocumentError(f"{where}: expected an integer, got {x!r}")
    return x


def _strings(xs: Any, where: str) -> list:
    if not isinstance(xs, list) or not all(isinstance(x, str) for x in xs):
        raise DocumentError(f"{where}: expected a list of strings")
    return xs


def instance_from_doc(doc: Any) -> tuple:
    doc = _keys(doc, "instance", {"vertices", "k"}, {"dyperedges", "hyperedges", "f", "g"})
    vertices = _strings(doc["vertices"], "vertices")
    dyperedges = []
    for i, a in enumerate(doc.get("dyperedges", [])):
        where = f"dyperedges[{i}]"
        a = _keys(a, where, {"id", "tail", "head"}, {"weight"})
        if not isinstance(a["id"], str) or not isinstance(a["head"], str):
            raise DocumentError(f"{where}: id and head must be strings")
        tail = _strings(a["tail"], f"{where}.tail")
        dyperedges.append(Dyperedge(a["id"], frozenset(tail), a["head"], _number(a.get("weight", 0), where)))
    hyperedges = []
    for i, e in enumerate(doc.get("hyperedges", [])):
        where = f"hyperedges[{i}]"
        e = _keys(e, where, {"id", "vertices"}, {"weight"})
        if not isinstance(e["id"], str):
            raise DocumentError(f"{where}: id must be a string")
        members = _strings(e["vertices"], f"{where}.vertices")
        hyperedges.append(Hyperedge(e["id"], frozenset(members), _number(e.get("weight", 0), where)))
    k = _integer(doc["k"], "k")
    bounds = {}
    for name in ("f", "g"):
        raw = doc.get(name, {})
        if not isinstance(raw, dict):
            raise DocumentError(f"{name}: expected an object")
        bounds[name] = {v: _integer(x, f"{name}.{v}") for v, x in raw.items()}
    h = MixedHypergraph(tuple(vertices), tuple(dyperedges), tuple(hyperedges))
    return h, RootBounds(k, bounds["f"], bounds["g"])


def instance_to_doc(h: MixedHypergraph, b: RootBounds) -> dict:
    return {
        "vertices": list(h.vertices),
        "dyperedges": [
            {"id": a.id, "tail": h.sort_vertices(a.tail), "head": a.head, "weight": a.weight}
            for a in h.dyperedges
        ],
        "hyperedges": [
            {"id": e.id, "vertices": h.sort_vertices(e.vertices), "weight": e.weight} for e in h.hyperedges
        ],
        "k": b.k,
        "f": {v: b.f[v] for v in h.vertices if v in b.f},
        "g": {v: b.g[v] for v in h.vertices if v in b.g},
    }


def _read_json(path: str) -> Any:
    with open(path, encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"{path}: invalid JSON ({exc})") from exc


def load_instance(path: str) -> tuple:
    return instance_from_doc(_read_json(path))


def packing_to_doc(h: MixedHypergraph, p: Packing) -> dict:
    return {
        "arborescences": [
            {
                "root": t.root,
                "edges": [{"id": te.ref, "from": te.tail, "to": te.head} for te in t.edges],
            }
            for t in p.arborescences
        ],
        "total_weight": p.total_weight(h),
    }


def packing_from_doc(doc: Any) -> Packing:
    doc = _keys(doc, "packing", {"arborescences"}, {"total_weight"})
    if not isinstance(doc["arborescences"], list):
        raise DocumentError("arborescences: expected a list")
    out = []
    for i, t in enumerate(doc["arborescences"]):
        where = f"arborescences[{i}]"
        t = _keys(t, where, {"root", "edges"})
        if not isinstance(t["edges"], list):
            raise DocumentError(f"{where}.edges: expected a list")
        edges = []
        for j, te in enumerate(t["edges"]):
            te = _keys(te, f"{where}.edges[{j}]", {"id", "from", "to"})
            edges.append(TrimmedEdge(te["id"], te["from"], te["to"]))
        out.append(Arborescence(t["root"], tuple(edges)))
    return Packing(tuple(out))


def load_packing(path: str) -> Packing:
    return packing_from_doc(_read_json(path))


def certificate_to_doc(cert, h: MixedHypergraph, b: RootBounds) -> dict:
    name = type(cert).__name__
    if isinstance(cert, FgViolation):
        v = cert.vertex
        return {"type": name, "vertex": v, "f": b.lower(v), "g": b.upper(v)}
    if isinstance(cert, (SubpartitionF, SubpartitionG)):
        lhs, rhs = cert.sides(h, b)
        classes = sorted((h.sort_vertices(X) for X in cert.classes), key=lambda X: [h.index[v] for v in X])
        return {"type": name, "classes": classes, "lhs": lhs, "rhs": rhs}
    if isinstance(cert, GpcViolation):
        doc = {"type": name, "condition": cert.condition}
        if cert.vertex is not None:
            doc["vertex"] = cert.vertex
        if cert.side is not None:
            doc["side"] = cert.side
        return doc
    if isinstance(cert, DualSet):
        return {"type": name, "elements": list(cert.elements), "rank_sum": cert.rank_sum, "target": cert.target}
    raise TypeError(f"not a certificate: {cert!r}")


def certificate_from_doc(doc: dict):
    kind = doc.get("type")
    if kind == "FgViolation":
        return FgViolation(doc["vertex"])
    if kind in ("SubpartitionF", "SubpartitionG"):
        cls = SubpartitionF if kind == "SubpartitionF" else SubpartitionG
        return cls(tuple(frozenset(X) for X in doc["classes"]))
    if kind == "GpcViolation":
        return GpcViolation(doc["condition"], doc.get("vertex"), doc.get("side"))
    if kind == "DualSet":
        return DualSet(tuple(doc["elements"]), doc["rank_sum"], doc["target"])
    raise DocumentError(f"unknown certificate type {kind!r}")
