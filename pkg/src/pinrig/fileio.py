"""File formats (JSON) and DOT emission for the command-line surface.

Graph files::

    {"vertices": [{"id": "a", "kind": "inner", "pos": [0, 1]}, ...],
     "edges": [["a", "p1"], ...]}

`kind` is ``inner`` or ``pinned``; `pos` is optional.  Edges between two
pinned vertices are irrelevant to the analysis and are dropped with a warning
rather than rejected (engineering inputs often include ground bracing).

Linkage files::

    {"links": ["ground", "2", {"id": "1", "driver": true}, ...],
     "ground": "ground",
     "joints": [{"incident": ["ground", "1"]}, ...]}

Scheme and certificate documents round-trip the corresponding in-memory
objects; vertex ids keep their JSON types (ints stay ints).
"""

from __future__ import annotations

import json
import warnings

from .assur import AssurComponent, AssurScheme
from .counting import LinkageSchema
from .errors import GraphError, PinrigWarning
from .generate import Certificate, ConstructionStep
from .graphs import PinnedGraph, vkey


def _as_pairs(edges):
    return [[u, v] for u, v in edges]


# -- graphs -------------------------------------------------------------------

def graph_from_dict(doc: dict) -> tuple:
    """Parse a graph document; returns (PinnedGraph, positions or None)."""
    if not isinstance(doc, dict) or "vertices" not in doc or "edges" not in doc:
        raise GraphError("graph document needs 'vertices' and 'edges'")
    inner, pins = [], []
    positions = {}
    seen = set()
    for entry in doc["vertices"]:
        if not isinstance(entry, dict) or "id" not in entry:
            raise GraphError(f"bad vertex entry {entry!r}")
        vid = entry["id"]
        if isinstance(vid, list) or isinstance(vid, dict):
            raise GraphError(f"vertex id must be a scalar, got {vid!r}")
        if vid in seen:
            raise GraphError(f"duplicate vertex id {vid!r}")
        seen.add(vid)
        kind = entry.get("kind", "inner")
        if kind == "inner":
            inner.append(vid)
        elif kind == "pinned":
            pins.append(vid)
        else:
            raise GraphError(f"vertex kind must be 'inner' or 'pinned', got {kind!r}")
        if "pos" in entry:
            pos = entry["pos"]
            if not (isinstance(pos, list) and len(pos) == 2):
                raise GraphError(f"pos must be [x, y], got {pos!r}")
            positions[vid] = (pos[0], pos[1])
    pin_set = set(pins)
    edges = []
    for pair in doc["edges"]:
        if not (isinstance(pair, list) and len(pair) == 2):
            raise GraphError(f"bad edge entry {pair!r}")
        u, v = pair
        if u in pin_set and v in pin_set:
            warnings.warn(f"dropping edge {u!r}-{v!r} between pinned vertices",
                          PinrigWarning, stacklevel=2)
            continue
        edges.append((u, v))
    graph = PinnedGraph(inner, pins, edges)
    return graph, (positions or None)


def graph_to_dict(g: PinnedGraph, positions=None) -> dict:
    verts = []
    for v in sorted(g.inner, key=vkey):
        entry = {"id": v, "kind": "inner"}
        if positions and v in positions:
            entry["pos"] = list(positions[v])
        verts.append(entry)
    for v in sorted(g.pins, key=vkey):
        entry = {"id": v, "kind": "pinned"}
        if positions and v in positions:
            entry["pos"] = list(positions[v])
        verts.append(entry)
    return {"vertices": verts, "edges": _as_pairs(g.edges)}


def load_graph(path):
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GraphError(f"invalid JSON in {path}: {exc}") from None
    return graph_from_dict(doc)


# -- linkages -----------------------------------------------------------------

def linkage_from_dict(doc: dict) -> LinkageSchema:
    if not isinstance(doc, dict) or "links" not in doc or "joints" not in doc:
        raise GraphError("linkage document needs 'links' and 'joints'")
    links, drivers = [], []
    for entry in doc["links"]:
        if isinstance(entry, dict):
            if "id" not in entry:
                raise GraphError(f"bad link entry {entry!r}")
            links.append(entry["id"])
            if entry.get("driver"):
                drivers.append(entry["id"])
        else:
            links.append(entry)
    if "ground" not in doc:
        raise GraphError("linkage document needs a 'ground' link id")
    joints = []
    for entry in doc["joints"]:
        if not isinstance(entry, dict) or "incident" not in entry:
            raise GraphError(f"bad joint entry {entry!r}")
        joints.append(frozenset(entry["incident"]))
    return LinkageSchema(links=frozenset(links), joints=tuple(joints),
                         ground=doc["ground"], drivers=frozenset(drivers))


def linkage_to_dict(s: LinkageSchema) -> dict:
    links = []
    for lid in sorted(s.links, key=vkey):
        if lid in s.drivers:
            links.append({"id": lid, "driver": True})
        else:
            links.append(lid)
    return {"links": links, "ground": s.ground,
            "joints": [{"incident": sorted(j, key=vkey)} for j in s.joints]}


def load_linkage(path) -> LinkageSchema:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GraphError(f"invalid JSON in {path}: {exc}") from None
    return linkage_from_dict(doc)


# -- schemes --------------------------------------------------------------------

def scheme_to_dict(s: AssurScheme) -> dict:
    comps = []
    for c in s.components:
        comps.append({
            "id": c.cid,
            "level": c.level,
            "inner": sorted(c.graph.inner, key=vkey),
            "pins": sorted(c.graph.pins, key=vkey),
            "edges": _as_pairs(c.graph.edges),
            "pin_map": [[p, t] for p, t in c.pin_map],
        })
    return {"ground": sorted(s.ground, key=vkey), "components": comps,
            "covers": [list(pair) for pair in s.covers]}


def scheme_from_dict(doc: dict) -> AssurScheme:
    if not isinstance(doc, dict) or "ground" not in doc or "components" not in doc:
        raise GraphError("scheme document needs 'ground' and 'components'")
    comps = []
    for entry in doc["components"]:
        try:
            graph = PinnedGraph(entry["inner"], entry["pins"],
                                [tuple(e) for e in entry["edges"]])
            comp = AssurComponent(cid=entry["id"], graph=graph,
                                  level=int(entry["level"]),
                                  pin_map=tuple((p, t) for p, t in entry["pin_map"]))
        except (KeyError, TypeError) as exc:
            raise GraphError(f"bad component entry: {exc}") from None
        comps.append(comp)
    return AssurScheme(components=tuple(comps),
                       ground=frozenset(doc["ground"]))


def scheme_to_dot(s: AssurScheme) -> str:
    """DOT digraph whose edges are exactly the cover relation, bottom to top."""
    lines = ["digraph assur_scheme {", "  rankdir=BT;", "  node [shape=box];"]
    for c in s.components:
        label = (f"{c.cid} (level {c.level})\\n"
                 f"{len(c.graph.inner)} inner / {len(c.graph.pins)} pins")
        lines.append(f'  "{c.cid}" [label="{label}"];')
    for a, b in s.covers:
        lines.append(f'  "{a}" -> "{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- certificates ----------------------------------------------------------------

def _step_to_dict(st: ConstructionStep) -> dict:
    out = {"kind": st.kind}
    for k, v in st.params:
        if k == "other":
            out[k] = certificate_to_dict(v)
        elif k in ("assignment",):
            out[k] = [[a, b] for a, b in v]
        elif k in ("moved",):
            out[k] = list(v)
        else:
            out[k] = v
    return out


def _step_from_dict(doc: dict) -> ConstructionStep:
    if "kind" not in doc:
        raise GraphError("certificate step needs a 'kind'")
    params = {}
    for k, v in doc.items():
        if k == "kind":
            continue
        if k == "other":
            params[k] = certificate_from_dict(v)
        elif k == "assignment":
            params[k] = tuple((a, b) for a, b in v)
        elif k == "moved":
            params[k] = tuple(v)
        else:
            params[k] = v
    return ConstructionStep(doc["kind"], tuple(sorted(params.items())))


def certificate_to_dict(cert: Certificate) -> dict:
    return {
        "base": {"kind": cert.base_kind, "vertices": list(cert.base_vertices)},
        "steps": [_step_to_dict(s) for s in cert.steps],
        "claimed": cert.claimed,
    }


def certificate_from_dict(doc: dict) -> Certificate:
    try:
        base = doc["base"]
        return Certificate(base_kind=base["kind"],
                           base_vertices=tuple(base["vertices"]),
                           steps=tuple(_step_from_dict(s) for s in doc["steps"]),
                           claimed=doc["claimed"])
    except (KeyError, TypeError) as exc:
        raise GraphError(f"bad certificate document: {exc}") from None


def load_certificate(path) -> Certificate:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GraphError(f"invalid JSON in {path}: {exc}") from None
    return certificate_from_dict(doc)
