"""Semantic-graph data model and line-delimited MRP record IO.

One JSON object per line. Known keys are mapped onto the dataclasses
below; everything else is kept verbatim in an `extras` dict so a
parse/serialize cycle is structurally lossless.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

FRAMEWORKS = ("dm", "psd", "eds", "ucca", "amr")

_GRAPH_KEYS = ("id", "framework", "input", "tops", "nodes", "edges")
_NODE_KEYS = ("id", "label", "properties", "values", "anchors")
_EDGE_KEYS = ("source", "target", "label", "attributes", "values")


class MrpError(Exception):
    pass


class MrpParseError(MrpError):
    def __init__(self, message, offset=None):
        super().__init__(message if offset is None else f"{message} (byte offset {offset})")
        self.offset = offset


class MrpValidationError(MrpError):
    pass


@dataclass
class MrpNode:
    id: int
    label: str | None = None
    properties: list = field(default_factory=list)  # (name, value) pairs
    anchors: list | None = None  # (from, to) character offsets
    extras: dict = field(default_factory=dict)

    def property_map(self):
        return dict(self.properties)


@dataclass
class MrpEdge:
    source: int
    target: int
    label: str | None = None
    attributes: list = field(default_factory=list)  # (name, value) pairs
    extras: dict = field(default_factory=dict)


@dataclass
class MrpGraph:
    id: str
    framework: str
    input: str = ""
    tops: list = field(default_factory=list)
    nodes: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        self.id = str(self.id)
        self.framework = self.framework.lower()

    def node_by_id(self):
        return {n.id: n for n in self.nodes}

    def copy(self):
        return parse_mrp(serialize_mrp(self))


@dataclass(frozen=True)
class Violation:
    code: str
    message: str


def _pairs(names, values):
    names = names or []
    values = values or []
    if len(names) != len(values):
        raise MrpParseError(f"properties/values length mismatch: {len(names)} vs {len(values)}")
    return list(zip(names, values))


def parse_mrp(line: str) -> MrpGraph:
    """Parse one MRP record. Raises MrpParseError on malformed JSON (with
    the byte offset) and MrpValidationError on dangling edge endpoints."""
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as e:
        raise MrpParseError(f"malformed record: {e.msg}", offset=e.pos) from None
    if not isinstance(obj, dict):
        raise MrpParseError("record is not an object")

    nodes = []
    for raw in obj.get("nodes") or []:
        anchors = None
        if raw.get("anchors") is not None:
            anchors = [(a["from"], a["to"]) for a in raw["anchors"]]
        nodes.append(MrpNode(
            id=raw["id"],
            label=raw.get("label"),
            properties=_pairs(raw.get("properties"), raw.get("values")),
            anchors=anchors,
            extras={k: v for k, v in raw.items() if k not in _NODE_KEYS},
        ))
    edges = []
    for raw in obj.get("edges") or []:
        edges.append(MrpEdge(
            source=raw["source"],
            target=raw["target"],
            label=raw.get("label"),
            attributes=_pairs(raw.get("attributes"), raw.get("values")),
            extras={k: v for k, v in raw.items() if k not in _EDGE_KEYS},
        ))
    g = MrpGraph(
        id=str(obj.get("id", "")),
        framework=str(obj.get("framework", "")).lower(),
        input=obj.get("input", ""),
        tops=list(obj.get("tops") or []),
        nodes=nodes,
        edges=edges,
        extras={k: v for k, v in obj.items() if k not in _GRAPH_KEYS},
    )
    ids = {n.id for n in g.nodes}
    for e in g.edges:
        if e.source not in ids or e.target not in ids:
            raise MrpValidationError(
                f"graph {g.id}: edge {e.source}->{e.target} references a missing node")
    return g


def serialize_mrp(g: MrpGraph) -> str:
    """One-line JSON record; parse_mrp(serialize_mrp(g)) == g."""
    obj = {"id": g.id}
    obj.update(g.extras)
    obj["framework"] = g.framework
    obj["input"] = g.input
    obj["tops"] = list(g.tops)
    obj["nodes"] = [_node_obj(n) for n in g.nodes]
    obj["edges"] = [_edge_obj(e) for e in g.edges]
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def _node_obj(n: MrpNode):
    obj = {"id": n.id}
    if n.label is not None:
        obj["label"] = n.label
    if n.properties:
        obj["properties"] = [p for p, _ in n.properties]
        obj["values"] = [v for _, v in n.properties]
    if n.anchors is not None:
        obj["anchors"] = [{"from": f, "to": t} for f, t in n.anchors]
    obj.update(n.extras)
    return obj


def _edge_obj(e: MrpEdge):
    obj = {"source": e.source, "target": e.target}
    if e.label is not None:
        obj["label"] = e.label
    if e.attributes:
        obj["attributes"] = [a for a, _ in e.attributes]
        obj["values"] = [v for _, v in e.attributes]
    obj.update(e.extras)
    return obj


def read_mrp_file(path) -> list:
    graphs = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                graphs.append(parse_mrp(line))
            except MrpError as e:
                raise type(e)(f"line {lineno}: {e}") from None
    return graphs


def write_mrp_file(path, graphs):
    with open(path, "w", encoding="utf-8") as f:
        for g in graphs:
            f.write(serialize_mrp(g))
            f.write("\n")


def validate_graph(g: MrpGraph) -> list:
    """Pure structural check; violations are data, not exceptions."""
    out = []
    seen = set()
    for n in g.nodes:
        if n.id in seen:
            out.append(Violation("DuplicateNodeId", f"node id {n.id} repeated"))
        seen.add(n.id)
    for n in g.nodes:
        if n.anchors is not None:
            for f, t in n.anchors:
                if f > t:
                    out.append(Violation("InvertedAnchor", f"node {n.id} anchor ({f},{t})"))
                elif f < 0 or t > len(g.input):
                    out.append(Violation("AnchorOutOfBounds",
                                         f"node {n.id} anchor ({f},{t}) outside input of length {len(g.input)}"))
        names = [p for p, _ in n.properties]
        if len(names) != len(set(names)):
            out.append(Violation("DuplicateProperty", f"node {n.id} repeats a property name"))
    for e in g.edges:
        if e.source not in seen:
            out.append(Violation("DanglingEdge", f"edge source {e.source} missing"))
        if e.target not in seen:
            out.append(Violation("DanglingEdge", f"edge target {e.target} missing"))
        if e.source == e.target:
            out.append(Violation("SelfLoop", f"edge {e.source}->{e.target}"))
    for t in g.tops:
        if t not in seen:
            out.append(Violation("DanglingTop", f"top {t} missing"))
    return out
