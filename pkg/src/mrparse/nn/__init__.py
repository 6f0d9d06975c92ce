from .core import BiLSTM, CharEncoder, Embedding, LSTMCell, Linear, Module

__all__ = ["BiLSTM", "CharEncoder", "Embedding", "LSTMCell", "Linear", "Module"]
