"""Binary linear codes described by parity-check matrices."""
import numpy as np

from .. import gf2
from ..errors import ResourceLimitError


def _words_by_weight(n):
    """All length-n binary words ordered by weight, then lexicographically."""
    if n > 20:
        raise ResourceLimitError(f"word enumeration refused for n={n}")
    idx = np.arange(1 << n, dtype=np.int64)
    words = ((idx[:, None] >> np.arange(n - 1, -1, -1)) & 1).astype(np.uint8)
    w = words.sum(axis=1)
    order = np.lexsort((idx, w))  # integer order equals string order
    return words[order]


class ClassicalLinearCode:
    """Binary linear code C = {c : H c = 0}."""

    def __init__(self, parity_check, name=""):
        h = gf2.as_bits(np.atleast_2d(parity_check))
        self.parity_check = h
        self.name = name
        self._d = None
        self._table = None

    @classmethod
    def trivial(cls, n):
        """The full space [n, n, 1]."""
        return cls(np.zeros((0, n), np.uint8), name=f"trivial{n}")

    @property
    def n(self):
        return self.parity_check.shape[1]

    @property
    def k(self):
        return self.n - gf2.rank(self.parity_check)

    def generator_matrix(self):
        return gf2.nullspace(self.parity_check, self.n)

    def contains(self, words):
        words = np.atleast_2d(words).astype(np.int64)
        return ~np.any((words @ self.parity_check.T.astype(np.int64)) & 1, axis=1)

    def syndrome(self, words):
        words = np.atleast_2d(words).astype(np.int64)
        return ((words @ self.parity_check.T.astype(np.int64)) & 1).astype(np.uint8)

    @property
    def d(self):
        if self._d is None:
            g = self.generator_matrix()
            k = g.shape[0]
            if k == 0:
                self._d = 0
            else:
                if k > 22:
                    raise ResourceLimitError("too many codewords to enumerate")
                combos = ((np.arange(1, 1 << k)[:, None] >> np.arange(k)) & 1).astype(np.int64)
                words = (combos @ g.astype(np.int64)) & 1
                self._d = int(words.sum(axis=1).min())
        return self._d

    def decoding_table(self):
        """Syndrome index -> minimum-weight word (ties: lexicographically least)."""
        if self._table is None:
            h = self.parity_check
            m = h.shape[0]
            table = np.zeros((1 << m, self.n), np.uint8)
            filled = np.zeros(1 << m, bool)
            words = _words_by_weight(self.n)
            idx = self.syndrome_index(self.syndrome(words))
            uniq, first = np.unique(idx, return_index=True)
            table[uniq] = words[first]
            filled[uniq] = True
            self._table = table
        return self._table

    def syndrome_index(self, syn):
        syn = np.atleast_2d(syn).astype(np.int64)
        return syn @ (1 << np.arange(syn.shape[1], dtype=np.int64))

    def __repr__(self):
        return f"<ClassicalLinearCode {self.name} [{self.n},{self.k}]>"


def hamming_7_4():
    from .registry import load_matrix
    return ClassicalLinearCode(load_matrix("hamming_7_4"), name="hamming_7_4")
