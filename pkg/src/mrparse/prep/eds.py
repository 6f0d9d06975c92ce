"""EDS-specific transforms.

Nodes without a direct surface-token mapping (type 1) get reduced into
their surface-mapped neighbours (type 2), either as a reserved `reduced:i`
node property (single neighbour, same anchor) or as a reserved edge label
(exactly two neighbours whose anchors tile the node's range). Both moves
are reversed exactly by eds_restore. Separately, multi-token phrases that
usually surface as one node get merged into one companion token.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..mrp import MrpEdge, MrpGraph, MrpNode

REDUCED_PROP = "reduced:"
REDUCED_EDGE = "reduced:"


class EdsError(Exception):
    pass


def _norm_anchors(anchors):
    return tuple(sorted(anchors or []))


def _range(anchors):
    return (min(f for f, _ in anchors), max(t for _, t in anchors))


def _is_surface_mapped(node, text):
    """Type-2 test: surface predicates start with '_'; otherwise the label
    must match the anchored text (lowercased, spaces as '+', optional
    plural 's' forgiven)."""
    if node.label is None:
        return False
    if node.label.startswith("_"):
        return True
    if not node.anchors:
        return False
    lo, hi = _range(node.anchors)
    surface = text[lo:hi].lower().replace(" ", "+")
    label = node.label.lower()
    return label in (surface, surface.rstrip("s"), surface + "s")


def _copy_graph(g):
    nodes = [MrpNode(n.id, n.label, list(n.properties),
                     list(n.anchors) if n.anchors is not None else None, dict(n.extras))
             for n in g.nodes]
    edges = [MrpEdge(e.source, e.target, e.label, list(e.attributes), dict(e.extras))
             for e in g.edges]
    return MrpGraph(id=g.id, framework=g.framework, input=g.input, tops=list(g.tops),
                    nodes=nodes, edges=edges, extras=dict(g.extras))


def eds_reduce(g: MrpGraph) -> MrpGraph:
    """Apply both reduction rules to fixpoint (single-neighbour folds
    first). Non-matching type-1 nodes are left alone; node count never
    increases."""
    g = _copy_graph(g)
    while True:
        if _fold_once(g):
            continue
        if _edge_once(g):
            continue
        break
    return g


def _adjacency(g):
    adj = {n.id: [] for n in g.nodes}
    for e in g.edges:
        if e.label and e.label.startswith(REDUCED_EDGE):
            continue  # already-reduced edges don't count as connections
        adj[e.source].append(e)
        adj[e.target].append(e)
    return adj


def _fold_once(g):
    by_id = g.node_by_id()
    adj = _adjacency(g)
    for a in sorted(g.nodes, key=lambda n: n.id):
        if _is_surface_mapped(a, g.input) or a.anchors is None or a.id in g.tops:
            continue
        links = adj[a.id]
        if len(links) != 1:
            continue
        e = links[0]
        b = by_id[e.target if e.source == a.id else e.source]
        if not _is_surface_mapped(b, g.input):
            continue
        if _norm_anchors(a.anchors) != _norm_anchors(b.anchors):
            continue
        direction = "out" if e.source == a.id else "in"
        k = sum(1 for p, _ in b.properties if p.startswith(REDUCED_PROP))
        b.properties.append((f"{REDUCED_PROP}{k}", json.dumps([a.label, e.label, direction])))
        g.nodes.remove(a)
        g.edges.remove(e)
        return True
    return False


def _edge_once(g):
    by_id = g.node_by_id()
    adj = _adjacency(g)
    for a in sorted(g.nodes, key=lambda n: n.id):
        if _is_surface_mapped(a, g.input) or a.anchors is None or a.id in g.tops:
            continue
        links = adj[a.id]
        if len(links) != 2:
            continue
        ends = []
        for e in links:
            other = by_id[e.target if e.source == a.id else e.source]
            ends.append((other, e))
        (b, eb), (c, ec) = ends
        if b.id == c.id:
            continue
        if not (_is_surface_mapped(b, g.input) and _is_surface_mapped(c, g.input)):
            continue
        if b.anchors is None or c.anchors is None:
            continue
        combined = _range(list(b.anchors) + list(c.anchors))
        if _norm_anchors(a.anchors) != (combined,):
            continue
        src, esrc, tgt, etgt = _pick_direction(b, eb, c, ec)
        payload = json.dumps([a.label,
                              esrc.label, "out" if esrc.source == a.id else "in",
                              etgt.label, "out" if etgt.source == a.id else "in"])
        g.edges.remove(eb)
        g.edges.remove(ec)
        g.edges.append(MrpEdge(src.id, tgt.id, REDUCED_EDGE + payload))
        g.nodes.remove(a)
        return True
    return False


def _pick_direction(b, eb, c, ec):
    """ARG1 endpoint is the source and ARG2 the target; otherwise the
    lexicographically smaller edge label wins the source slot."""
    lb, lc = eb.label or "", ec.label or ""
    if lb == "ARG2" and lc == "ARG1":
        return c, ec, b, eb
    if lb == "ARG1" and lc == "ARG2":
        return b, eb, c, ec
    if (lb, b.id) <= (lc, c.id):
        return b, eb, c, ec
    return c, ec, b, eb


def eds_restore(g: MrpGraph) -> MrpGraph:
    """Reverse eds_reduce: reserved edge labels become nodes spanning both
    endpoints, reserved properties unfold into single-link nodes."""
    g = _copy_graph(g)
    next_id = max((n.id for n in g.nodes), default=-1) + 1
    by_id = g.node_by_id()

    new_edges = []
    for e in list(g.edges):
        if not (e.label and e.label.startswith(REDUCED_EDGE)):
            continue
        payload = e.label[len(REDUCED_EDGE):]
        try:
            label, lab_src, dir_src, lab_tgt, dir_tgt = json.loads(payload)
        except (ValueError, TypeError):
            raise EdsError(f"unrecognized reduced edge label {e.label!r}") from None
        b, c = by_id[e.source], by_id[e.target]
        anchors = [_range(list(b.anchors or []) + list(c.anchors or []))]
        a = MrpNode(next_id, label=label, anchors=anchors)
        next_id += 1
        g.nodes.append(a)
        by_id[a.id] = a
        g.edges.remove(e)
        new_edges.append(MrpEdge(*(a.id, b.id) if dir_src == "out" else (b.id, a.id), lab_src))
        new_edges.append(MrpEdge(*(a.id, c.id) if dir_tgt == "out" else (c.id, a.id), lab_tgt))
    g.edges.extend(new_edges)

    for b in list(g.nodes):
        kept = []
        folded = []
        for name, value in b.properties:
            if name.startswith(REDUCED_PROP):
                folded.append((name, value))
            else:
                kept.append((name, value))
        b.properties = kept
        for name, value in folded:
            try:
                label, edge_label, direction = json.loads(value)
            except (ValueError, TypeError):
                raise EdsError(f"unrecognized reduced property {name}={value!r} on node {b.id}") from None
            a = MrpNode(next_id, label=label,
                        anchors=sorted(b.anchors) if b.anchors is not None else None)
            next_id += 1
            g.nodes.append(a)
            if direction == "out":
                g.edges.append(MrpEdge(a.id, b.id, edge_label))
            else:
                g.edges.append(MrpEdge(b.id, a.id, edge_label))
    return g


def eds_exchange_properties(g: MrpGraph) -> MrpGraph:
    """Swap label and carg value on property-bearing nodes; a second
    application undoes the first. The swap makes the surface string the
    generated label (copyable from the sentence) and the original label a
    categorical target."""
    g = _copy_graph(g)
    for n in g.nodes:
        for i, (name, value) in enumerate(n.properties):
            if name == "carg":
                n.properties[i] = (name, n.label)
                n.label = value
                break
    return g


@dataclass
class MultiwordTable:
    """phrase -> (probability the phrase surfaces as one node, count of
    such single-node occurrences)."""
    entries: dict = field(default_factory=dict)

    def should_merge(self, phrase) -> bool:
        p, count = self.entries.get(phrase, (0.0, 0))
        return p > 0.5 and count >= 2

    def to_lines(self):
        return [json.dumps({"phrase": k, "prob": v[0], "count": v[1]}, sort_keys=True)
                for k, v in sorted(self.entries.items())]

    @classmethod
    def from_lines(cls, lines):
        entries = {}
        for line in lines:
            if not line.strip():
                continue
            obj = json.loads(line)
            entries[obj["phrase"]] = (obj["prob"], obj["count"])
        return cls(entries)


def _node_token_span(node, tokens):
    if not node.anchors:
        return None
    lo, hi = _range(node.anchors)
    covered = [i for i, t in enumerate(tokens) if t.start >= lo and t.end <= hi]
    if not covered:
        return None
    if tokens[covered[0]].start != lo or tokens[covered[-1]].end != hi:
        return None
    return covered[0], covered[-1]


def build_multiword_table(corpus) -> MultiwordTable:
    """corpus: (graph, companion) pairs. A phrase occurrence counts as
    single-node when some node's anchor covers exactly that token window."""
    single = {}
    for g, sent in corpus:
        spans = set()
        for n in g.nodes:
            span = _node_token_span(n, sent.tokens)
            if span and span[1] > span[0]:
                spans.add(span)
        for lo, hi in spans:
            phrase = " ".join(t.form.lower() for t in sent.tokens[lo:hi + 1])
            single[phrase] = single.get(phrase, 0) + 1
    totals = {k: 0 for k in single}
    for g, sent in corpus:
        forms = [t.form.lower() for t in sent.tokens]
        for phrase in totals:
            words = phrase.split(" ")
            for i in range(len(forms) - len(words) + 1):
                if forms[i:i + len(words)] == words:
                    totals[phrase] += 1
    entries = {k: (single[k] / totals[k] if totals[k] else 0.0, single[k]) for k in single}
    return MultiwordTable(entries)


def apply_multiword(sent, table: MultiwordTable):
    """Merge mergeable phrase occurrences into single tokens, greedy
    left-to-right with longer phrases first."""
    from ..companion import retokenize

    mergeable = [p.split(" ") for p in table.entries if table.should_merge(p)]
    mergeable.sort(key=lambda w: (-len(w), w))
    forms = [t.form.lower() for t in sent.tokens]
    taken = [False] * len(forms)
    groups = []
    for words in mergeable:
        i = 0
        while i + len(words) <= len(forms):
            if forms[i:i + len(words)] == words and not any(taken[i:i + len(words)]):
                groups.append((i, i + len(words) - 1))
                for k in range(i, i + len(words)):
                    taken[k] = True
                i += len(words)
            else:
                i += 1
    return retokenize(sent, sorted(groups))
