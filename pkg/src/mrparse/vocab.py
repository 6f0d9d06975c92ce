"""Frequency vocabularies with reserved entries and deterministic index
assignment (frequency desc, string asc)."""

from __future__ import annotations

PAD = "<pad>"
UNK = "<unk>"
BOS = "<s>"
END = "</s>"
NONE_LABEL = "<none>"


class Vocab:
    def __init__(self, entries, counts=None, reserved=(PAD, UNK)):
        self.reserved = tuple(reserved)
        self.entries = list(self.reserved) + [e for e in entries if e not in self.reserved]
        self.counts = dict(counts or {})
        self._index = {e: i for i, e in enumerate(self.entries)}

    @classmethod
    def build(cls, items, reserved=(PAD, UNK), min_count=1):
        counts = {}
        for item in items:
            counts[item] = counts.get(item, 0) + 1
        ordered = sorted((e for e, c in counts.items() if c >= min_count),
                         key=lambda e: (-counts[e], e))
        return cls(ordered, counts=counts, reserved=reserved)

    def __len__(self):
        return len(self.entries)

    def __contains__(self, item):
        return item in self._index

    def index(self, item):
        idx = self._index.get(item)
        if idx is None:
            idx = self._index.get(UNK)
            if idx is None:
                raise KeyError(f"{item!r} not in vocabulary and no {UNK} entry")
        return idx

    def value(self, idx):
        return self.entries[idx]

    def to_lines(self):
        return [f"{e}\t{self.counts.get(e, 0)}" for e in self.entries]

    @classmethod
    def from_lines(cls, lines, reserved=None):
        entries = []
        counts = {}
        for line in lines:
            if not line.strip():
                continue
            e, c = line.rsplit("\t", 1)
            entries.append(e)
            counts[e] = int(c)
        if reserved is None:
            reserved = tuple(e for e in entries if e.startswith("<") and e.endswith(">"))[:0]
        n_res = 0
        for e in entries:
            if e in (PAD, UNK, BOS, END, NONE_LABEL) and entries.index(e) == n_res:
                n_res += 1
            else:
                break
        v = cls.__new__(cls)
        v.reserved = tuple(entries[:n_res])
        v.entries = entries
        v.counts = counts
        v._index = {e: i for i, e in enumerate(entries)}
        return v
