import pytest

from mrparse.companion import CompanionSentence, Token
from mrparse.mrp import MrpEdge, MrpGraph, MrpNode
from mrparse.prep import (AnchorError, anchors_to_spans, decode_edge_label,
                          decode_graph_attrs, encode_edge_label, encode_graph_attrs,
                          spans_to_anchors, ucca_mark_implicit, ucca_strip_implicit)


def sent(*forms):
    toks = []
    pos = 0
    for f in forms:
        toks.append(Token(f, f.lower(), "XX", pos, pos + len(f)))
        pos += len(f) + 1
    return CompanionSentence(tokens=toks)


class TestAnchors:
    def test_single_token_anchor(self):
        g = MrpGraph(id="1", framework="eds", input="Pierre naps",
                     nodes=[MrpNode(0, "named", anchors=[(0, 6)])])
        out, flagged = anchors_to_spans(g, sent("Pierre", "naps"))
        assert out.nodes[0].anchors == [(0, 0)]
        assert flagged == []

    def test_multi_token_anchor_roundtrip(self):
        s = sent("a", "bb", "ccc", "dddd", "e")
        g = MrpGraph(id="1", framework="eds", input=s.text(),
                     nodes=[MrpNode(0, "x", anchors=[(s.tokens[2].start, s.tokens[4].end)])])
        out, flagged = anchors_to_spans(g, s)
        assert out.nodes[0].anchors == [(2, 4)]
        assert flagged == []
        back = spans_to_anchors(out, s)
        assert back.nodes[0].anchors == [(s.tokens[2].start, s.tokens[4].end)]

    def test_mid_token_anchor_snaps_and_flags(self):
        g = MrpGraph(id="1", framework="eds", input="Pierre naps",
                     nodes=[MrpNode(7, "x", anchors=[(0, 3)])])
        out, flagged = anchors_to_spans(g, sent("Pierre", "naps"))
        assert out.nodes[0].anchors == [(0, 0)]
        assert flagged == [7]

    def test_unanchored_nodes_pass_through(self):
        g = MrpGraph(id="1", framework="ucca", input="hi",
                     nodes=[MrpNode(0, None)])
        out, flagged = anchors_to_spans(g, sent("hi"))
        assert out.nodes[0].anchors is None and flagged == []

    def test_uncovered_range_is_error(self):
        g = MrpGraph(id="1", framework="eds", input="ab",
                     nodes=[MrpNode(0, "x", anchors=[(10, 12)])])
        with pytest.raises(AnchorError):
            anchors_to_spans(g, sent("ab"))

    def test_span_out_of_range_is_error(self):
        g = MrpGraph(id="1", framework="eds", input="ab",
                     nodes=[MrpNode(0, "x", anchors=[(0, 5)])])
        with pytest.raises(AnchorError):
            spans_to_anchors(g, sent("ab"))


def ucca_graph(labels, edges=(), tops=(0,)):
    return MrpGraph(id="u", framework="ucca", input="",
                    tops=list(tops),
                    nodes=[MrpNode(i, lab) for i, lab in enumerate(labels)],
                    edges=[MrpEdge(s, t, lab) for s, t, lab in edges])


class TestImplicitLabels:
    def test_two_unlabeled_nodes_numbered_in_sequence_order(self):
        # root(0, labeled) -> 1 (unlabeled), 1 -> 2 (labeled), root -> 3 (unlabeled)
        g = ucca_graph(["root", None, "zz", None],
                       edges=[(0, 1, "A"), (1, 2, "C"), (0, 3, "P")])
        out = ucca_mark_implicit(g)
        by_id = out.node_by_id()
        assert by_id[1].label == "n_0"
        assert by_id[3].label == "n_1"

    def test_no_unlabeled_nodes_unchanged(self):
        g = ucca_graph(["a", "b"], edges=[(0, 1, "A")])
        assert ucca_mark_implicit(g) == g

    def test_strip_mark_roundtrip(self):
        g = ucca_graph([None, "n_3", None, "ok"],
                       edges=[(0, 1, "A"), (0, 2, "B"), (2, 3, "C")])
        out = ucca_strip_implicit(ucca_mark_implicit(g))
        assert out == g

    def test_collision_with_genuine_label_escaped(self):
        g = ucca_graph(["n_3", None], edges=[(0, 1, "A")])
        marked = ucca_mark_implicit(g)
        labels = {n.id: n.label for n in marked.nodes}
        assert labels[0] == "n__3"
        assert labels[1] == "n_0"
        assert ucca_strip_implicit(marked) == g


class TestEdgeAttrCodec:
    def test_remote_roundtrip(self):
        s = encode_edge_label("A", [("remote", True)])
        assert s == "A⊕remote"
        assert decode_edge_label(s) == ("A", [("remote", True)])

    def test_plain_label(self):
        assert encode_edge_label("A", []) == "A"
        assert decode_edge_label("A") == ("A", [])

    def test_separator_in_label_escaped(self):
        label = "A⊕B"
        s = encode_edge_label(label, [("remote", True)])
        assert decode_edge_label(s) == (label, [("remote", True)])

    def test_value_attributes(self):
        s = encode_edge_label("E", [("kind", "x")])
        assert decode_edge_label(s) == ("E", [("kind", "x")])

    def test_bijection_over_alphabet(self):
        labels = ["A", "P", "A⊕", "⊕⊕", "E=F", ""]
        attr_sets = [[], [("remote", True)], [("remote", True), ("kind", "q")]]
        seen = {}
        for lab in labels:
            for attrs in attr_sets:
                enc = encode_edge_label(lab, attrs)
                key = (lab, tuple(sorted(attrs)))
                dec_lab, dec_attrs = decode_edge_label(enc)
                assert (dec_lab, tuple(sorted(dec_attrs))) == key
                assert enc not in seen or seen[enc] == key
                seen[enc] = key

    def test_graph_level_roundtrip(self):
        g = ucca_graph(["a", "b", "c"],
                       edges=[(0, 1, "A"), (0, 2, "F")])
        g.edges[0].attributes = [("remote", True)]
        enc = encode_graph_attrs(g)
        assert enc.edges[0].label == "A⊕remote"
        assert enc.edges[0].attributes == []
        assert decode_graph_attrs(enc) == g
