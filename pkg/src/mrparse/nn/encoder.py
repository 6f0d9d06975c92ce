"""Word-representation assembly and BiLSTM sentence encoding.

Every token is the concatenation of word, POS, lemma, character-LSTM and
NER embeddings; out-of-vocabulary forms and lemmas back off to the unknown
row while the character channel still sees the real string.
"""

from __future__ import annotations

from dataclasses import dataclass

from .. import autograd as ag
from ..vocab import Vocab
from .core import BiLSTM, CharEncoder, Embedding, Module


@dataclass
class EncoderConfig:
    word_dim: int = 64
    pos_dim: int = 16
    lemma_dim: int = 32
    char_dim: int = 16
    char_hidden: int = 32
    ner_dim: int = 16
    hidden: int = 128
    layers: int = 2

    @property
    def input_width(self):
        return self.word_dim + self.pos_dim + self.lemma_dim + self.char_hidden + self.ner_dim

    @property
    def output_width(self):
        return 2 * self.hidden


def build_token_vocabs(sentences):
    """Word/lemma/xpos/ner/char vocabularies over a training corpus."""
    words, lemmas, xpos, ner, chars = [], [], [], [], []
    for s in sentences:
        for t in s.tokens:
            words.append(t.form.lower())
            lemmas.append(t.lemma.lower())
            xpos.append(t.xpos)
            chars.extend(t.form)
        ner.extend(s.ner_tags)
    return {
        "word": Vocab.build(words),
        "lemma": Vocab.build(lemmas),
        "xpos": Vocab.build(xpos),
        "ner": Vocab.build(ner),
        "char": Vocab.build(chars),
    }


class SentenceEncoder(Module):
    def __init__(self, cfg: EncoderConfig, vocabs, rng):
        super().__init__()
        self.cfg = cfg
        self.vocabs = vocabs
        self.word_emb = self.child("word", Embedding(len(vocabs["word"]), cfg.word_dim, rng))
        self.pos_emb = self.child("pos", Embedding(len(vocabs["xpos"]), cfg.pos_dim, rng))
        self.lemma_emb = self.child("lemma", Embedding(len(vocabs["lemma"]), cfg.lemma_dim, rng))
        self.ner_emb = self.child("ner", Embedding(len(vocabs["ner"]), cfg.ner_dim, rng))
        self.char_enc = self.child("char", CharEncoder(len(vocabs["char"]), cfg.char_dim,
                                                       cfg.char_hidden, rng))
        self.bilstm = self.child("bilstm", BiLSTM(cfg.input_width, cfg.hidden, cfg.layers, rng))

    def embed_sentence(self, sent, char_cache=None):
        """Token representations (n, input_width). A shared char_cache dict
        lets one backward pass reuse character encodings of repeated
        forms."""
        v = self.vocabs
        words = self.word_emb([v["word"].index(t.form.lower()) for t in sent.tokens])
        pos = self.pos_emb([v["xpos"].index(t.xpos) for t in sent.tokens])
        lemmas = self.lemma_emb([v["lemma"].index(t.lemma.lower()) for t in sent.tokens])
        ner = self.ner_emb([v["ner"].index(tag) for tag in sent.ner_tags])
        chars = []
        for t in sent.tokens:
            if char_cache is not None and t.form in char_cache:
                chars.append(char_cache[t.form])
                continue
            enc = self.char_enc([v["char"].index(ch) for ch in t.form])
            if char_cache is not None:
                char_cache[t.form] = enc
            chars.append(enc)
        char_block = ag.concat(chars, axis=0)
        return ag.concat([words, pos, lemmas, char_block, ner], axis=1)

    def encode(self, sent, char_cache=None):
        """(R, r_n): per-token hidden states (n, 2*hidden) and the final
        state used to seed the decoder."""
        if not sent.tokens:
            raise ValueError("cannot encode an empty sentence")
        o = self.embed_sentence(sent, char_cache=char_cache)
        r = self.bilstm(o)
        n = r.shape[0]
        return r, r[n - 1:n]
