"""JSON documents for graphs, sheaves, polarizations and results.

Rationals are written as ``"p/q"`` strings (plain ``"p"`` when integral) so
that no value ever passes through a float.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .curve import DualGraph
from .errors import InvalidGraph, InvalidPolarization, InvalidSheaf
from .jordan_holder import JHClass, JHFiltration
from .reduction import TwistTrace
from .sheaf import CombSheaf
from .stability import Polarization, StabilityReport


def rational(x) -> str:
    return str(Fraction(x))


def _need(doc, key, kind, exc):
    if not isinstance(doc, dict) or key not in doc:
        raise exc(f"{kind} document lacks {key!r}")
    return doc[key]


def graph_from_json(doc: dict) -> DualGraph:
    verts = _need(doc, "vertices", "graph", InvalidGraph)
    try:
        vertices = [(v["id"], v.get("genus", 0)) for v in verts]
        edges = [tuple(e) for e in doc.get("edges", [])]
        markings = {m["id"]: m["on"] for m in doc.get("markings", [])}
    except (KeyError, TypeError) as exc:
        raise InvalidGraph(f"malformed graph document: {exc}") from None
    if any(v.get("nodal") is False for v in verts if isinstance(v, dict)):
        raise InvalidGraph("only nodal curves are supported")
    return DualGraph(vertices, edges, markings)


def graph_to_json(g: DualGraph) -> dict:
    return {
        "vertices": [{"id": v, "genus": g.genus(v)} for v in g.vertices],
        "edges": [[e.u, e.v] for e in g.edges],
        "markings": [{"id": k, "on": v} for k, v in sorted(g.markings.items())],
    }


def sheaf_from_json(doc: dict, graph: DualGraph) -> CombSheaf:
    md = _need(doc, "multidegree", "sheaf", InvalidSheaf)
    if not isinstance(md, dict):
        raise InvalidSheaf("multidegree must be an object keyed by vertex id")
    support = doc.get("support")
    return CombSheaf(graph, md, [tuple(e) for e in doc.get("nonfree", [])], support)


def sheaf_to_json(c: CombSheaf) -> dict:
    g = c.graph
    return {
        "support": g.sorted_members(c.ambient_mask),
        "nonfree": [[e.u, e.v, e.k] for e in (g.edges[n] for n in sorted(c.nonfree_idx))],
        "multidegree": c.multidegree,
    }


def polarization_from_json(doc: dict) -> Polarization:
    rank = _need(doc, "rank", "polarization", InvalidPolarization)
    weights = _need(doc, "weights", "polarization", InvalidPolarization)
    if not isinstance(weights, dict):
        raise InvalidPolarization("weights must be an object keyed by vertex id")
    return Polarization(rank, weights)


def polarization_to_json(p: Polarization) -> dict:
    return {
        "rank": p.rank,
        "weights": dict(p.weights),
        "slopes": {v: rational(q) for v, q in p.slopes.items()},
    }


def seshadri_from_json(doc: dict) -> tuple[dict, int]:
    a = _need(doc, "a", "seshadri", InvalidPolarization)
    chi = _need(doc, "chi", "seshadri", InvalidPolarization)
    try:
        return {v: Fraction(x) for v, x in a.items()}, int(chi)
    except (ValueError, ZeroDivisionError, AttributeError) as exc:
        raise InvalidPolarization(f"bad Seshadri weights: {exc}") from None


def _pair(p):
    return None if p is None else {"subcurve": sorted(p[0], key=str), "beta": rational(p[1])}


def report_to_json(r: StabilityReport) -> dict:
    out: dict[str, Any] = {
        "predicate": r.predicate,
        "verdict": r.verdict,
        "minimum": _pair(r.minimum),
        "violations": [_pair(v) for v in r.violations],
    }
    if r.components:
        out["components"] = list(r.components)
    return out


def jhclass_to_json(c: JHClass) -> list:
    return [sheaf_to_json(p) for p in c.pieces]


def filtration_to_json(f: JHFiltration) -> list:
    return [
        {
            "ambient": f.steps[k].sheaf.graph.sorted_members(f.steps[k].sheaf.ambient_mask),
            "sheaf": sheaf_to_json(s.sheaf),
            "quotient_support": s.piece.graph.sorted_members(s.piece.ambient_mask),
            "piece": sheaf_to_json(s.piece),
        }
        for k, s in enumerate(f.steps)
    ]


def trace_to_json(t: TwistTrace) -> dict:
    g = t.start.graph
    return {
        "start": t.start.multidegree,
        "steps": [
            {"fired": g.sorted_members(s.fired), "beta_min": rational(s.beta_min), "phase": s.phase}
            for s in t.steps
        ],
        "final": t.final.multidegree if t.final is not None else None,
    }


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)
