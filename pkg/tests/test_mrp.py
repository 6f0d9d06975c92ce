"""Record IO and validation tests, including the parse/serialize fuzz
round-trip harness."""

import numpy as np
import pytest

from mrparse import mrp
from mrparse.mrp import MrpEdge, MrpGraph, MrpNode


def test_parse_empty_graph():
    g = mrp.parse_mrp('{"id": "1", "framework": "dm", "input": "", "tops": [], "nodes": [], "edges": []}')
    assert g.nodes == [] and g.edges == [] and g.tops == []


def test_parse_minimal_graph():
    g = mrp.parse_mrp(
        '{"id": "2", "framework": "dm", "input": "a b", "tops": [0],'
        ' "nodes": [{"id": 0}, {"id": 1}],'
        ' "edges": [{"source": 0, "target": 1, "label": "ARG1"}]}')
    assert len(g.nodes) == 2
    assert len(g.edges) == 1
    assert g.edges[0].label == "ARG1"


def test_parse_preserves_unknown_keys():
    line = ('{"id": "3", "flavor": 0, "framework": "eds", "version": 1.0, "time": "2019-06-01",'
            ' "input": "x", "tops": [0], "nodes": [{"id": 0, "label": "a", "zzz": [1, 2]}], "edges": []}')
    g = mrp.parse_mrp(line)
    assert g.extras["flavor"] == 0 and g.extras["time"] == "2019-06-01"
    assert g.nodes[0].extras == {"zzz": [1, 2]}
    assert mrp.parse_mrp(mrp.serialize_mrp(g)) == g


def test_parse_error_carries_byte_offset():
    with pytest.raises(mrp.MrpParseError) as ei:
        mrp.parse_mrp('{"id": "1", "nodes": [}')
    assert ei.value.offset == 22


def test_parse_rejects_dangling_edge():
    with pytest.raises(mrp.MrpValidationError):
        mrp.parse_mrp('{"id": "1", "framework": "dm", "input": "", "tops": [],'
                      ' "nodes": [{"id": 0}], "edges": [{"source": 0, "target": 99}]}')


def test_serialize_empty_and_anchor_passthrough():
    g = MrpGraph(id="e", framework="dm")
    line = mrp.serialize_mrp(g)
    assert '"nodes":[]' in line and '"edges":[]' in line
    g2 = MrpGraph(id="a", framework="eds", input="Pierre",
                  nodes=[MrpNode(0, label="named", anchors=[(0, 6)])])
    line2 = mrp.serialize_mrp(g2)
    assert '"from":0' in line2 and '"to":6' in line2


def random_graph(rng, graph_id):
    labels = ["want", "_dog_n_1", "αβ", 'quo"te', "x2", "x10", None]
    n = int(rng.integers(0, 7))
    nodes = []
    text = "word " * max(n, 1)
    for i in range(n):
        anchors = None
        if rng.random() < 0.6:
            a = int(rng.integers(0, len(text)))
            b = int(rng.integers(a, len(text)))
            anchors = [(a, b)]
        props = []
        if rng.random() < 0.4:
            props = [("carg", "Pierre"), ("pos", "NNP")][: int(rng.integers(1, 3))]
        nodes.append(MrpNode(
            id=i, label=labels[int(rng.integers(0, len(labels)))],
            properties=props, anchors=anchors,
            extras={"rank": int(rng.integers(0, 5))} if rng.random() < 0.3 else {},
        ))
    edges = []
    if n >= 2:
        for _ in range(int(rng.integers(0, 2 * n))):
            s, t = rng.integers(0, n, size=2)
            attrs = [("remote", True)] if rng.random() < 0.3 else []
            edges.append(MrpEdge(int(s), int(t), label="ARG" + str(int(rng.integers(1, 4))),
                                 attributes=attrs))
    tops = sorted(set(int(t) for t in rng.integers(0, n, size=int(rng.integers(0, 3))))) if n else []
    fw = ["dm", "psd", "eds", "ucca", "amr"][int(rng.integers(0, 5))]
    return MrpGraph(id=str(graph_id), framework=fw, input=text.rstrip(),
                    tops=tops, nodes=nodes, edges=edges,
                    extras={"version": 1.0} if rng.random() < 0.5 else {})


def test_roundtrip_100_random_graphs():
    rng = np.random.default_rng(42)
    for i in range(100):
        g = random_graph(rng, i)
        line = mrp.serialize_mrp(g)
        g2 = mrp.parse_mrp(line)
        assert g2 == g, f"round trip failed for graph {i}"
        assert mrp.serialize_mrp(g2) == line


def test_validate_clean_graph():
    g = MrpGraph(id="v", framework="dm", input="a b", tops=[0],
                 nodes=[MrpNode(0, label="a", anchors=[(0, 1)]), MrpNode(1, label="b")],
                 edges=[MrpEdge(0, 1, "ARG1")])
    assert mrp.validate_graph(g) == []


def test_validate_flags_dangling_and_inverted():
    g = MrpGraph(id="v", framework="dm", input="ab",
                 nodes=[MrpNode(0, anchors=[(2, 1)])],
                 edges=[MrpEdge(0, 99, "x")])
    codes = {v.code for v in mrp.validate_graph(g)}
    assert "DanglingEdge" in codes
    assert "InvertedAnchor" in codes


def test_validate_flags_selfloop_topless_and_dup():
    g = MrpGraph(id="v", framework="ucca", input="ab", tops=[7],
                 nodes=[MrpNode(0), MrpNode(0)],
                 edges=[MrpEdge(0, 0, "x")])
    codes = [v.code for v in mrp.validate_graph(g)]
    assert "SelfLoop" in codes and "DanglingTop" in codes and "DuplicateNodeId" in codes


def test_validate_is_pure():
    g = MrpGraph(id="v", framework="dm", input="ab", nodes=[MrpNode(0, anchors=[(5, 9)])])
    assert mrp.validate_graph(g) == mrp.validate_graph(g)


def test_file_roundtrip(tmp_path):
    rng = np.random.default_rng(7)
    graphs = [random_graph(rng, i) for i in range(20)]
    path = tmp_path / "graphs.mrp"
    mrp.write_mrp_file(path, graphs)
    assert mrp.read_mrp_file(path) == graphs
