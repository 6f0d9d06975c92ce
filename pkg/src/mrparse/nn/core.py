"""Parameter containers and recurrent building blocks."""

from __future__ import annotations

import numpy as np

from .. import autograd as ag
from ..autograd import Tensor


class Module:
    """Holds named parameters and child modules; names are stable so
    checkpoints and the optimizer see a deterministic layout."""

    def __init__(self):
        self._params = {}
        self._children = {}

    def param(self, name, array):
        t = Tensor(array, requires_grad=True)
        self._params[name] = t
        return t

    def child(self, name, module):
        self._children[name] = module
        return module

    def named_parameters(self, prefix=""):
        for name in sorted(self._params):
            yield prefix + name, self._params[name]
        for name in sorted(self._children):
            yield from self._children[name].named_parameters(prefix + name + ".")

    def parameters(self):
        return [p for _, p in self.named_parameters()]

    def load_state(self, arrays, prefix=""):
        for name, p in self.named_parameters(prefix):
            if name not in arrays:
                raise KeyError(f"checkpoint missing parameter {name}")
            if arrays[name].shape != p.data.shape:
                raise ValueError(f"{name}: checkpoint shape {arrays[name].shape} vs model {p.data.shape}")
            p.data = arrays[name].copy()

    def state_arrays(self, prefix=""):
        return {name: p.data for name, p in self.named_parameters(prefix)}


class Linear(Module):
    def __init__(self, n_in, n_out, rng, bias=True):
        super().__init__()
        self.w = self.param("w", rng.normal(scale=1.0 / np.sqrt(n_in), size=(n_in, n_out)))
        self.b = self.param("b", np.zeros(n_out)) if bias else None

    def __call__(self, x):
        return ag.linear(x, self.w, self.b)


class FeedForward(Module):
    """Single hidden layer with relu, the projection used by scorers."""

    def __init__(self, n_in, n_out, rng):
        super().__init__()
        self.lin = self.child("lin", Linear(n_in, n_out, rng))

    def __call__(self, x):
        return ag.relu(self.lin(x))


class Embedding(Module):
    def __init__(self, n, dim, rng):
        super().__init__()
        self.table = self.param("table", rng.uniform(-0.1, 0.1, size=(n, dim)))

    def __call__(self, indices):
        return ag.take(self.table, np.asarray(indices, dtype=np.intp))


class LSTMCell(Module):
    """Fused-gate cell: gates = [x; h] @ w + b, order (input, forget,
    candidate, output); forget bias starts at 1."""

    def __init__(self, n_in, n_hidden, rng):
        super().__init__()
        self.n_hidden = n_hidden
        scale = 1.0 / np.sqrt(n_in + n_hidden)
        self.w = self.param("w", rng.normal(scale=scale, size=(n_in + n_hidden, 4 * n_hidden)))
        b = np.zeros(4 * n_hidden)
        b[n_hidden:2 * n_hidden] = 1.0
        self.b = self.param("b", b)

    def step(self, x, h, c):
        """x (B, n_in), h/c (B, n_hidden) -> new (h, c)."""
        nh = self.n_hidden
        z = ag.add(ag.matmul(ag.concat([x, h], axis=1), self.w), self.b)
        i = ag.sigmoid(z[:, 0 * nh:1 * nh])
        f = ag.sigmoid(z[:, 1 * nh:2 * nh])
        g = ag.tanh(z[:, 2 * nh:3 * nh])
        o = ag.sigmoid(z[:, 3 * nh:4 * nh])
        c2 = ag.add(ag.mul(f, c), ag.mul(i, g))
        h2 = ag.mul(o, ag.tanh(c2))
        return h2, c2

    def zero_state(self, batch=1):
        z = Tensor(np.zeros((batch, self.n_hidden)))
        return z, Tensor(np.zeros((batch, self.n_hidden)))

    def run(self, xs, h=None, c=None, reverse=False):
        """xs (n, n_in) -> outputs (n, n_hidden), processing rows one at a
        time (optionally back to front)."""
        n = xs.shape[0]
        if h is None:
            h, c = self.zero_state()
        outs = [None] * n
        order = range(n - 1, -1, -1) if reverse else range(n)
        for t in order:
            h, c = self.step(xs[t:t + 1], h, c)
            outs[t] = h
        return ag.concat(outs, axis=0), (h, c)


class BiLSTM(Module):
    def __init__(self, n_in, n_hidden, n_layers, rng):
        super().__init__()
        self.n_layers = n_layers
        self.cells = []
        for layer in range(n_layers):
            fwd = self.child(f"l{layer}f", LSTMCell(n_in if layer == 0 else 2 * n_hidden, n_hidden, rng))
            bwd = self.child(f"l{layer}b", LSTMCell(n_in if layer == 0 else 2 * n_hidden, n_hidden, rng))
            self.cells.append((fwd, bwd))

    def __call__(self, xs):
        """xs (n, n_in) -> (n, 2*n_hidden): per-position [forward; backward]."""
        h = xs
        for fwd, bwd in self.cells:
            f_out, _ = fwd.run(h)
            b_out, _ = bwd.run(h, reverse=True)
            h = ag.concat([f_out, b_out], axis=1)
        return h


class CharEncoder(Module):
    """Single-layer character LSTM; a word's representation is the final
    hidden state."""

    def __init__(self, n_chars, char_dim, n_hidden, rng):
        super().__init__()
        self.emb = self.child("emb", Embedding(n_chars, char_dim, rng))
        self.cell = self.child("cell", LSTMCell(char_dim, n_hidden, rng))

    def __call__(self, char_indices):
        xs = self.emb(char_indices)
        _, (h, _) = self.cell.run(xs)
        return h  # (1, n_hidden)
