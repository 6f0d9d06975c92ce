"""Reentrant-graph/tree conversion.

A node with k incoming edges appears k times in the linearized tree; every
occurrence after the first is a copy carrying the idx of the first. Node
order is depth-first from the root with children sorted alphanumerically
by label ("x2" before "x10"), ties broken by node id. The inverse merges
positions sharing an idx back into single nodes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .mrp import MrpEdge, MrpGraph, MrpNode

ROOT_LABEL = "<ROOT>"

_SEGMENTS = re.compile(r"\d+|\D+")


class TreeError(Exception):
    pass


def natural_key(label):
    """Lexicographic key with numeric-aware segments."""
    if label is None:
        label = ""
    key = []
    for seg in _SEGMENTS.findall(label):
        if seg.isdigit():
            key.append((0, int(seg), ""))
        else:
            key.append((1, 0, seg))
    return tuple(key)


@dataclass
class SeqNode:
    label: str | None
    idx: int
    parent: int | None = None
    edge_label: str | None = None
    anchors: list | None = None
    properties: list = field(default_factory=list)
    node_id: int | None = None  # originating graph node, when known


@dataclass
class NodeSequence:
    nodes: list

    def __len__(self):
        return len(self.nodes)

    def labels(self):
        return [n.label for n in self.nodes]

    def indices(self):
        return [n.idx for n in self.nodes]

    def validate(self):
        for t, n in enumerate(self.nodes):
            if n.idx > t:
                raise TreeError(f"position {t}: idx {n.idx} references a later position")
            if n.idx != t and self.nodes[n.idx].idx != n.idx:
                raise TreeError(f"position {t}: idx {n.idx} does not point at an original node")
            if n.parent is not None and n.parent >= t:
                raise TreeError(f"position {t}: parent {n.parent} not earlier in sequence")


def graph_to_tree(g: MrpGraph) -> NodeSequence:
    """Linearize a rooted graph, duplicating every extra edge entrance.

    Edges into already-visited nodes (reentrancies and cycles alike)
    become copies. Disconnected nodes are an error; with several tops a
    synthetic root is prepended and linked to each of them.
    """
    by_id = g.node_by_id()
    if not g.tops:
        raise TreeError(f"graph {g.id}: no top node")
    children = {n.id: [] for n in g.nodes}
    for e in g.edges:
        children[e.source].append(e)
    for nid in children:
        children[nid].sort(key=lambda e: (natural_key(by_id[e.target].label), e.target, e.label or ""))

    seq = []
    first_pos = {}

    def emit(node, parent_pos, edge_label):
        pos = len(seq)
        if node.id in first_pos:
            orig = first_pos[node.id]
            seq.append(SeqNode(label=node.label, idx=orig, parent=parent_pos,
                               edge_label=edge_label, anchors=_copy_anchors(node),
                               node_id=node.id))
            return None
        first_pos[node.id] = pos
        seq.append(SeqNode(label=node.label, idx=pos, parent=parent_pos,
                           edge_label=edge_label, anchors=_copy_anchors(node),
                           properties=list(node.properties), node_id=node.id))
        return pos

    if len(g.tops) == 1:
        root = by_id[g.tops[0]]
        stack = [(root, None, None)]
    else:
        seq.append(SeqNode(label=ROOT_LABEL, idx=0, parent=None, edge_label=None))
        first_pos[None] = 0
        tops = sorted((by_id[t] for t in g.tops), key=lambda n: (natural_key(n.label), n.id))
        stack = [(n, 0, None) for n in reversed(tops)]

    while stack:
        node, parent_pos, edge_label = stack.pop()
        pos = emit(node, parent_pos, edge_label)
        if pos is None:
            continue
        for e in reversed(children[node.id]):
            stack.append((by_id[e.target], pos, e.label))

    unreachable = sorted(n.id for n in g.nodes if n.id not in first_pos)
    if unreachable:
        raise TreeError(f"graph {g.id}: nodes unreachable from top: {unreachable}")
    return NodeSequence(nodes=seq)


def _copy_anchors(node):
    return [tuple(a) for a in node.anchors] if node.anchors is not None else None


def tree_to_graph(seq: NodeSequence, framework="amr", graph_id="", input_text="") -> MrpGraph:
    """Merge positions sharing an idx into nodes and turn parent links into
    edges. Exact inverse of graph_to_tree up to node ids."""
    if not seq.nodes:
        raise TreeError("empty sequence has no root")
    seq.validate()

    originals = [t for t, n in enumerate(seq.nodes) if n.idx == t]
    has_virtual_root = seq.nodes[0].label == ROOT_LABEL and seq.nodes[0].node_id is None
    reusable = [t for t in originals if not (has_virtual_root and t == 0)]
    reuse_ids = [seq.nodes[t].node_id for t in reusable]
    if all(i is not None for i in reuse_ids) and len(set(reuse_ids)) == len(reuse_ids):
        new_id = {t: seq.nodes[t].node_id for t in reusable}
        if has_virtual_root:
            new_id[0] = max(reuse_ids, default=-1) + 1
    else:
        new_id = {t: k for k, t in enumerate(originals)}

    nodes = []
    for t in originals:
        n = seq.nodes[t]
        nodes.append(MrpNode(id=new_id[t], label=n.label,
                             properties=list(n.properties),
                             anchors=list(n.anchors) if n.anchors is not None else None))
    edges = []
    for t, n in enumerate(seq.nodes):
        if n.parent is None:
            continue
        src = new_id[seq.nodes[n.parent].idx]
        tgt = new_id[n.idx]
        edges.append(MrpEdge(source=src, target=tgt, label=n.edge_label))

    root = seq.nodes[0]
    if root.label == ROOT_LABEL and root.idx == 0:
        root_id = new_id[0]
        tops = [e.target for e in edges if e.source == root_id]
        nodes = [n for n in nodes if n.id != root_id]
        edges = [e for e in edges if e.source != root_id]
        seen = set()
        tops = [t for t in tops if not (t in seen or seen.add(t))]
    else:
        tops = [new_id[0]]
    return MrpGraph(id=graph_id, framework=framework, input=input_text,
                    tops=tops, nodes=nodes, edges=edges)
