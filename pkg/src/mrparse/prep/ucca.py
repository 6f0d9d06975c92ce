"""UCCA-specific transforms: naming unlabeled nodes and folding edge
attributes into composite edge labels."""

from __future__ import annotations

import re

from ..mrp import MrpEdge, MrpGraph, MrpNode
from ..treeify import graph_to_tree

IMPLICIT_RE = re.compile(r"^n_(\d+)$")
_ESCAPED_RE = re.compile(r"^n(__+)(\d+)$")

SEP = "⊕"  # ⊕


def ucca_mark_implicit(g: MrpGraph) -> MrpGraph:
    """Give every unlabeled node a positional name n_i, i counted in node
    sequence order. Genuine labels already shaped like n_3 get an extra
    underscore so the namespace stays reserved."""
    order = [sn.node_id for sn in graph_to_tree(g).nodes
             if sn.node_id is not None]
    seen = set()
    rank = {}
    counter = 0
    for nid in order:
        if nid in seen:
            continue
        seen.add(nid)
        rank[nid] = counter
        counter += 1
    nodes = []
    implicit_ids = [nid for nid in sorted(rank, key=rank.get)
                    if _find_node(g, nid).label is None]
    number = {nid: i for i, nid in enumerate(implicit_ids)}
    for n in g.nodes:
        if n.label is None:
            label = f"n_{number[n.id]}"
        elif IMPLICIT_RE.match(n.label) or _ESCAPED_RE.match(n.label):
            label = "n_" + n.label[1:]  # one more underscore
        else:
            label = n.label
        nodes.append(MrpNode(id=n.id, label=label, properties=list(n.properties),
                             anchors=list(n.anchors) if n.anchors is not None else None,
                             extras=dict(n.extras)))
    return MrpGraph(id=g.id, framework=g.framework, input=g.input, tops=list(g.tops),
                    nodes=nodes, edges=list(g.edges), extras=dict(g.extras))


def _find_node(g, nid):
    for n in g.nodes:
        if n.id == nid:
            return n
    raise KeyError(nid)


def ucca_strip_implicit(g: MrpGraph) -> MrpGraph:
    """Inverse of ucca_mark_implicit: positional names drop to None,
    escaped genuine labels lose one underscore."""
    nodes = []
    for n in g.nodes:
        label = n.label
        if label is not None:
            if IMPLICIT_RE.match(label):
                label = None
            else:
                m = _ESCAPED_RE.match(label)
                if m:
                    label = "n" + m.group(1)[1:] + m.group(2)
        nodes.append(MrpNode(id=n.id, label=label, properties=list(n.properties),
                             anchors=list(n.anchors) if n.anchors is not None else None,
                             extras=dict(n.extras)))
    return MrpGraph(id=g.id, framework=g.framework, input=g.input, tops=list(g.tops),
                    nodes=nodes, edges=list(g.edges), extras=dict(g.extras))


# -- composite edge labels --------------------------------------------------


def _escape(s):
    return s.replace(SEP, SEP + SEP)


def _split_composite(s):
    parts = []
    buf = []
    i = 0
    while i < len(s):
        if s[i] == SEP:
            if i + 1 < len(s) and s[i + 1] == SEP:
                buf.append(SEP)
                i += 2
            else:
                parts.append("".join(buf))
                buf = []
                i += 1
        else:
            buf.append(s[i])
            i += 1
    parts.append("".join(buf))
    return parts


def encode_edge_label(label, attributes) -> str:
    """("A", [("remote", True)]) -> "A⊕remote". Boolean-true attributes
    encode as bare names, anything else as name=value."""
    out = [_escape(label or "")]
    for name, value in sorted(attributes, key=lambda p: p[0]):
        if "=" in name:
            raise ValueError(f"attribute name {name!r} may not contain '='")
        if value is True:
            out.append(_escape(name))
        else:
            out.append(_escape(name) + "=" + _escape(str(value)))
    return SEP.join(out)


def decode_edge_label(s: str) -> tuple:
    parts = _split_composite(s)
    attrs = []
    for part in parts[1:]:
        if "=" in part:
            name, value = part.split("=", 1)
            attrs.append((name, value))
        else:
            attrs.append((part, True))
    return parts[0], attrs


def encode_graph_attrs(g: MrpGraph) -> MrpGraph:
    edges = [MrpEdge(e.source, e.target, encode_edge_label(e.label, e.attributes), [],
                     dict(e.extras)) for e in g.edges]
    return MrpGraph(id=g.id, framework=g.framework, input=g.input, tops=list(g.tops),
                    nodes=list(g.nodes), edges=edges, extras=dict(g.extras))


def decode_graph_attrs(g: MrpGraph) -> MrpGraph:
    edges = []
    for e in g.edges:
        label, attrs = decode_edge_label(e.label or "")
        edges.append(MrpEdge(e.source, e.target, label or None, attrs, dict(e.extras)))
    return MrpGraph(id=g.id, framework=g.framework, input=g.input, tops=list(g.tops),
                    nodes=list(g.nodes), edges=edges, extras=dict(g.extras))
