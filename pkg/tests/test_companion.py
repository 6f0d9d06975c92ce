import pytest

from mrparse import companion as comp
from mrparse.companion import CompanionSentence, Token
from mrparse.mrp import MrpGraph

DOC = """#s1
1\tPierre\tPierre\tNNP\tTokenRange=0:6

#s2
1\tDogs\tdog\tNNS\t_
2\tbark\tbark\tVBP\t_
"""


def test_read_single_token_sentence():
    sents = comp.read_companion("1\tPierre\tPierre\tNNP\tTokenRange=0:6\n")
    assert len(sents) == 1
    t = sents[0].tokens[0]
    assert (t.form, t.lemma, t.xpos, t.start, t.end) == ("Pierre", "Pierre", "NNP", 0, 6)


def test_read_empty_document():
    assert comp.read_companion("") == []


def test_read_two_sentences_with_reconstructed_offsets():
    sents = comp.read_companion(DOC)
    assert len(sents) == 2
    assert sents[0].id == "s1" and sents[1].id == "s2"
    s2 = sents[1]
    assert [(t.start, t.end) for t in s2.tokens] == [(0, 4), (5, 9)]
    assert s2.text() == "Dogs bark"


def test_read_column_mismatch_names_line():
    with pytest.raises(comp.CompanionError) as ei:
        comp.read_companion("1\tonly\ttwo\n")
    assert "line 1" in str(ei.value)


def test_companion_file_roundtrip(tmp_path):
    sents = comp.read_companion(DOC)
    path = tmp_path / "c.tsv"
    comp.write_companion(path, sents)
    assert comp.read_companion(path.read_text()) == sents


def test_ner_sidecar():
    lines = comp.read_ner_sidecar("O PER\nO O O\n")
    assert lines == [["O", "PER"], ["O", "O", "O"]]


def test_gazetteer_longest_match():
    tagger = comp.GazetteerTagger()
    tags = tagger.tag(["Pierre", "Vinken", "saw", "Rome", "."])
    assert tags == ["PER", "PER", "O", "LOC", "O"]


def _sent(pairs, tags=None):
    toks = []
    pos = 0
    for form, lemma in pairs:
        toks.append(Token(form, lemma, "XX", pos, pos + len(form)))
        pos += len(form) + 1
    return CompanionSentence(tokens=toks, ner_tags=tags or [])


class TestAlignCompanion:
    def test_identity_when_consistent(self):
        s = _sent([("Dogs", "dog"), ("bark", "bark")])
        g = MrpGraph(id="1", framework="dm", input="Dogs bark")
        out = comp.align_companion(g, s)
        assert out.forms == ["Dogs", "bark"]
        assert [(t.start, t.end) for t in out.tokens] == [(0, 4), (5, 9)]

    def test_contraction_tokens_kept_offsets_mapped(self):
        # companion splits "don't" while the input spells it solid
        s = _sent([("do", "do"), ("n't", "not"), ("go", "go")])
        g = MrpGraph(id="1", framework="dm", input="don't go")
        out = comp.align_companion(g, s)
        assert out.forms == ["do", "n't", "go"]
        assert [(t.start, t.end) for t in out.tokens] == [(0, 2), (2, 5), (6, 8)]
        assert out.lemmas == ["do", "not", "go"]

    def test_resplit_from_input(self):
        # companion merged what the input spells as two tokens
        s = _sent([("don't", "do"), ("go", "go")])
        g = MrpGraph(id="1", framework="dm", input="do n't go")
        out = comp.align_companion(g, s)
        assert out.forms == ["do", "n't", "go"]
        assert "".join(out.forms[:2]) == "don't"
        assert out.lemmas[0] == "do"

    def test_solid_compound_consumed_without_gap(self):
        s = _sent([("New", "New"), ("York", "York"), ("won", "win")])
        g = MrpGraph(id="1", framework="dm", input="NewYork won")
        out = comp.align_companion(g, s)
        assert out.forms == ["New", "York", "won"]
        assert [(t.start, t.end) for t in out.tokens] == [(0, 3), (3, 7), (8, 11)]

    def test_merge_when_companion_diverges(self):
        s = _sent([("gonna", "go"), ("leave", "leave")])
        g = MrpGraph(id="1", framework="dm", input="gon na leave")
        out = comp.align_companion(g, s)
        assert out.forms == ["gon", "na", "leave"]
        assert out.lemmas[0] == "go"

    def test_concatenation_invariant(self):
        cases = [
            ([("a", "a"), ("b", "b")], "a  b"),
            ([("ab", "ab")], "a b"),
            ([("x", "x"), ("y", "y"), ("z", "z")], "xyz"),
        ]
        for pairs, text in cases:
            g = MrpGraph(id="1", framework="dm", input=text)
            out = comp.align_companion(g, _sent(pairs))
            rebuilt = out.text()
            assert rebuilt.rstrip() == text.rstrip()[:len(rebuilt)] or all(
                text[t.start:t.end] == t.form for t in out.tokens)

    def test_disjoint_strings_error(self):
        s = _sent([("alpha", "alpha"), ("beta", "beta")])
        g = MrpGraph(id="1", framework="dm", input="zzz qqq www")
        with pytest.raises(comp.AlignmentError):
            comp.align_companion(g, s)


def test_retokenize_merges_groups():
    s = _sent([("such", "such"), ("as", "as"), ("dogs", "dog")])
    out = comp.retokenize(s, [(0, 1)])
    assert out.forms == ["such as", "dogs"]
    assert out.tokens[0].lemma == "such+as"
    assert (out.tokens[0].start, out.tokens[0].end) == (0, 7)


def test_replace_span_shifts_offsets():
    s = _sent([("met", "meet"), ("Pierre", "Pierre"), ("Vinken", "Vinken"), ("today", "today")],
              tags=["O", "PER", "PER", "O"])
    out = comp.replace_span(s, 1, 2, "PERSON_0", tag="PER")
    assert out.forms == ["met", "PERSON_0", "today"]
    assert out.text() == "met PERSON_0 today"
    assert out.ner_tags == ["O", "PER", "O"]
