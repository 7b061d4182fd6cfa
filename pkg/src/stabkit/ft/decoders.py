"""Classical decoders used by feed-forward steps.

Every decoder maps record bits of shape (batch, m) to corrections or
logical bits.  They are written so that decoding the fault-free record
XOR a flip pattern equals decoding the flips alone, up to the fixed
reference correction: syndromes of fault-free records vanish, and logical
bits enter linearly.  That is what lets the frame engine feed them flip
records directly.
"""
import numpy as np

from ..codes.classical import ClassicalLinearCode


def _index(bits, checks):
    if checks.shape[0] == 0:
        return np.zeros(bits.shape[0], np.int64)
    s = (bits.astype(np.int64) @ checks.T.astype(np.int64)) & 1
    return s @ (1 << np.arange(checks.shape[0], dtype=np.int64))


class TableCorrection:
    """Pauli correction looked up from the syndrome of a measured word."""

    def __init__(self, checks, table_x, table_z):
        self.checks = np.asarray(checks, np.uint8)
        self.table_x = np.asarray(table_x, np.uint8)
        self.table_z = np.asarray(table_z, np.uint8)

    @classmethod
    def classical(cls, checks, pauli):
        """Min-weight leader of the classical code with these checks, as X or Z."""
        table = ClassicalLinearCode(checks).decoding_table()
        zero = np.zeros_like(table)
        return cls(checks, table, zero) if pauli == "X" else cls(checks, zero, table)

    def __call__(self, bits):
        s = _index(bits, self.checks)
        return self.table_x[s], self.table_z[s]


class LogicalParity:
    """Logical value of a transversally measured block after classical correction."""

    def __init__(self, checks, logical_support):
        self.checks = np.asarray(checks, np.uint8)
        self.table = ClassicalLinearCode(self.checks).decoding_table()
        self.support = np.asarray(logical_support, np.int64)

    def __call__(self, bits):
        s = _index(bits, self.checks)
        fixed = bits ^ self.table[s]
        return ((fixed.astype(np.int64) @ self.support) & 1).astype(np.uint8)


class TeleportCorrection:
    """Knill EC: Z-bar^(a) X-bar^(b) on the output block from the two Bell-measurement words."""

    def __init__(self, code, n_first):
        hx, hz = code.css_checks()
        lx = code.logical_x[0].x
        lz = code.logical_z[0].z
        self.n_first = n_first
        self.a = LogicalParity(hx, lx)   # X-basis word of the data block
        self.b = LogicalParity(hz, lz)   # Z-basis word of the middle block
        self.lx = lx.astype(np.uint8)
        self.lz = lz.astype(np.uint8)

    def __call__(self, bits):
        a = self.a(bits[:, : self.n_first])
        b = self.b(bits[:, self.n_first:])
        return np.outer(b, self.lx).astype(np.uint8), np.outer(a, self.lz).astype(np.uint8)


class MajorityCorrection:
    """Shor EC consensus: generator bits are cat-measurement parities.

    ``groups[r][i]`` lists the record columns of the cat state used for
    generator i in round r.  The consensus syndrome is the one reported by
    a strict majority of rounds, else the last round's.
    """

    def __init__(self, groups, table_x, table_z, linear=None):
        self.groups = groups
        self.table_x = table_x
        self.table_z = table_z
        self.linear = linear  # (destab_x, destab_z) rows for linear decoding

    def syndromes(self, bits):
        rounds = []
        col = 0
        for rnd in self.groups:
            s = np.zeros(bits.shape[0], np.int64)
            for i, cols in enumerate(rnd):
                par = np.bitwise_xor.reduce(bits[:, col: col + len(cols)], axis=1).astype(np.int64)
                col += len(cols)
                s |= par << i
            rounds.append(s)
        return np.stack(rounds, axis=1)

    def consensus(self, bits):
        syn = self.syndromes(bits)
        r = syn.shape[1]
        counts = np.stack([(syn == syn[:, [j]]).sum(axis=1) for j in range(r)], axis=1)
        best = counts.argmax(axis=1)
        rows = np.arange(syn.shape[0])
        pick = syn[rows, best]
        return np.where(counts[rows, best] * 2 > r, pick, syn[:, -1])

    def __call__(self, bits):
        s = self.consensus(bits)
        if self.linear is None:
            return self.table_x[s], self.table_z[s]
        dx, dz = self.linear
        a = dx.shape[0]
        sb = ((s[:, None] >> np.arange(a)) & 1).astype(np.int64)
        return ((sb @ dx.astype(np.int64)) & 1).astype(np.uint8), ((sb @ dz.astype(np.int64)) & 1).astype(np.uint8)
