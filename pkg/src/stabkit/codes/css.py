"""CSS construction from two nested classical codes."""
import numpy as np

from .. import gf2
from ..errors import CodeConstructionError
from ..pauli import PauliOperator
from .classical import ClassicalLinearCode, _words_by_weight
from .stabilizer import StabilizerCode


def _independent_rows(h):
    """Keep the original rows, dropping any that depend on earlier ones."""
    keep = []
    for i in range(h.shape[0]):
        if gf2.rank(h[keep + [i]]) == len(keep) + 1:
            keep.append(i)
    return h[keep]


def css_construct(c1, c2, name=""):
    """Z generators from the checks of C1, X generators from the checks of C2.

    Requires C2-perp to lie inside C1.  The result is [[n, k1 + k2 - n]]
    with distance at least min(d1, d2).
    """
    if c1.n != c2.n:
        raise CodeConstructionError("classical codes have different lengths")
    n = c1.n
    h1 = c1.parity_check
    h2 = c2.parity_check
    if h2.shape[0]:
        bad = ~c1.contains(h2)
        if bad.any():
            row = h2[np.nonzero(bad)[0][0]]
            raise CodeConstructionError(
                "dual codeword " + "".join(map(str, row)) + " of C2 is not in C1")
    hz = _independent_rows(h1)
    hx = _independent_rows(h2)
    gens = [PauliOperator(np.zeros(n, np.uint8), r) for r in hz]
    gens += [PauliOperator(r, np.zeros(n, np.uint8)) for r in hx]
    lx, lz = css_logicals(hx, hz, n)
    if not gens:
        code = StabilizerCode.empty(n, name=name)
        code._lx, code._lz = tuple(lx), tuple(lz)
        return code
    return StabilizerCode(gens, lx, lz, name=name)


def css_logicals(hx, hz, n):
    """X-type and Z-type logical pairs, minimum weight with lexicographic ties."""
    words = _words_by_weight(n)[1:]
    w64 = words.astype(np.int64)

    def kernel(h):
        if h.shape[0] == 0:
            return np.ones(words.shape[0], bool)
        return ~np.any((w64 @ h.T.astype(np.int64)) & 1, axis=1)

    xcand = kernel(hz)  # commute with Z checks
    zcand = kernel(hx)
    k = n - hx.shape[0] - hz.shape[0]
    lx, lz = [], []
    for _ in range(k):
        span = np.vstack([hx] + [p.x[None, :] for p in lx]) if (hx.shape[0] or lx) else np.zeros((0, n), np.uint8)
        space = gf2.RowSpace(span)
        ok = xcand.copy()
        for p in lz:
            ok &= ((w64 @ p.z.astype(np.int64)) & 1) == 0
        ok &= ~space.contains(words) if span.shape[0] else True
        xw = words[np.nonzero(ok)[0][0]]
        okz = zcand & (((w64 @ xw.astype(np.int64)) & 1) == 1)
        for p in lx:
            okz &= ((w64 @ p.x.astype(np.int64)) & 1) == 0
        zw = words[np.nonzero(okz)[0][0]]
        lx.append(PauliOperator(xw, np.zeros(n, np.uint8)))
        lz.append(PauliOperator(np.zeros(n, np.uint8), zw))
    return lx, lz
