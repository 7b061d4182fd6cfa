"""Small dense linear algebra over GF(2) on uint8 numpy arrays."""
import numpy as np


def as_bits(a):
    return np.asarray(a, dtype=np.uint8) & 1


def rref(m, col_order=None):
    """Row-reduce ``m``; returns (reduced, pivot columns, transform).

    ``transform @ m == reduced`` (mod 2).  Columns are scanned in
    ``col_order`` (default left to right).
    """
    m = as_bits(m).copy()
    rows, cols = m.shape
    t = np.eye(rows, dtype=np.uint8)
    order = range(cols) if col_order is None else col_order
    pivots = []
    r = 0
    for c in order:
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + nz[0]
        if p != r:
            m[[r, p]] = m[[p, r]]
            t[[r, p]] = t[[p, r]]
        hit = np.nonzero(m[:, c])[0]
        hit = hit[hit != r]
        if hit.size:
            m[hit] ^= m[r]
            t[hit] ^= t[r]
        pivots.append(c)
        r += 1
    return m, pivots, t


def rank(m):
    m = as_bits(m)
    if m.size == 0:
        return 0
    return len(rref(m)[1])


def nullspace(m, n=None):
    """Basis (as rows) of {v : m v = 0}."""
    m = as_bits(m)
    if m.ndim != 2 or m.shape[0] == 0:
        n = m.shape[1] if m.ndim == 2 else n
        return np.eye(n, dtype=np.uint8)
    r, piv, _ = rref(m)
    n = m.shape[1]
    free = [c for c in range(n) if c not in piv]
    basis = np.zeros((len(free), n), dtype=np.uint8)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, pc in enumerate(piv):
            basis[i, pc] = r[row, f]
    return basis


def solve_lexmin(m, b):
    """Lexicographically least v (index 0 most significant) with m v = b, or None."""
    m = as_bits(m)
    b = as_bits(b)
    rows, cols = m.shape
    if rows == 0:
        return np.zeros(cols, dtype=np.uint8)
    red, piv, t = rref(m, col_order=range(cols - 1, -1, -1))
    rhs = (t.astype(np.int64) @ b) & 1
    if np.any(rhs[len(piv):]):
        return None
    v = np.zeros(cols, dtype=np.uint8)
    for row, pc in enumerate(piv):
        v[pc] = rhs[row]
    return v


class RowSpace:
    """Membership tests against the row space of a fixed matrix."""

    def __init__(self, m):
        m = as_bits(m)
        if m.ndim != 2 or m.shape[0] == 0:
            self.basis = np.zeros((0, m.shape[-1] if m.ndim == 2 else 0), np.uint8)
            self.pivots = []
        else:
            red, piv, _ = rref(m)
            self.basis = red[: len(piv)]
            self.pivots = piv

    def reduce(self, vecs):
        """Reduce rows of ``vecs`` against the basis (batch)."""
        v = as_bits(vecs).copy()
        single = v.ndim == 1
        if single:
            v = v[None, :]
        for row, pc in zip(self.basis, self.pivots):
            hit = v[:, pc] == 1
            v[hit] ^= row
        return v[0] if single else v

    def contains(self, vecs):
        red = self.reduce(vecs)
        return ~np.any(red, axis=-1)
