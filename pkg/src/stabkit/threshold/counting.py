"""Fault-set counting for extended rectangles."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import comb

import numpy as np

from ..errors import ResourceLimitError, UnsupportedError
from ..ft.frame import FrameEngine
from ..ft.properties import exrec_failures, iter_patterns

DEFAULT_CAP = 10 ** 9


def count_fault_sets(exrec, t=1):
    """Number of sets of exactly t+1 locations (exact integer)."""
    n = exrec if isinstance(exrec, int) else len(exrec.locations)
    return comb(n, t + 1)


def max_fault_sets(exrecs, t=1):
    """A: maximum over ExRec types of the (t+1)-location set count."""
    return max(count_fault_sets(e, t) for e in exrecs)


def single_fault_failures(exrec, chunk=1 << 16):
    """Every single fault with every Pauli type; returns (patterns, accepted, failures, first failure)."""
    eng = FrameEngine(exrec)
    total = acc = bad = 0
    first = None
    for L, C in iter_patterns(exrec, 1, chunk):
        P = L.shape[0]
        res = eng.run(P, (np.arange(P), L[:, 0], C[:, 0]))
        fail = exrec_failures(exrec, res) & ~res.rejected
        total += P
        acc += int((~res.rejected).sum())
        bad += int(fail.sum())
        if first is None and fail.any():
            j = int(np.nonzero(fail)[0][0])
            first = (int(L[j, 0]), int(C[j, 0]))
    return total, acc, bad, first


def _pair_blocks(exrec, chunk):
    """Yield (loc_a, loc_b, code_a, code_b) arrays covering all pairs of faulty locations."""
    npaul = np.array([l.n_paulis for l in exrec.locations])
    ids = np.arange(npaul.size)
    # per location, flat list of (loc, code)
    flat_l = np.repeat(ids, npaul)
    flat_c = np.concatenate([np.arange(1, m + 1) for m in npaul])
    start = np.concatenate([[0], np.cumsum(npaul)])
    buf, size = [], 0
    for i in ids[:-1]:
        rest = slice(start[i + 1], flat_l.size)
        nr = flat_l.size - start[i + 1]
        for ci in range(1, npaul[i] + 1):
            buf.append((np.full(nr, i), flat_l[rest], np.full(nr, ci), flat_c[rest]))
            size += nr
        if size >= chunk:
            yield tuple(np.concatenate(x) for x in zip(*buf))
            buf, size = [], 0
    if buf:
        yield tuple(np.concatenate(x) for x in zip(*buf))


@dataclass
class MalignantCount:
    locations: int
    A: int
    malignant_pairs: int            # location pairs with at least one failing assignment
    malignant_assignments: int      # failing (pair, Pauli, Pauli) assignments
    assignments: int
    c_pred: float                   # sum over pairs of failing fraction; rate ~ c_pred p^2
    single_failures: int

    @property
    def p_T_bound(self):
        return 1.0 / self.A

    def to_dict(self):
        return {"locations": self.locations, "A": self.A, "malignant_pairs": self.malignant_pairs,
                "malignant_assignments": self.malignant_assignments, "assignments": self.assignments,
                "c_pred": self.c_pred, "p_T_bound": self.p_T_bound, "single_failures": self.single_failures}


def malignant_count(exrec, t=1, jobs=1, cap=DEFAULT_CAP, chunk=1 << 17):
    """Enumerate all location pairs with all Pauli assignments (t = 1 only).

    An assignment is malignant when the ExRec accepts it and is incorrect.
    Under depolarizing noise each fault type at location i has probability
    p / n_i, so the leading-order failure rate is c_pred * p**2 with
    c_pred = sum over pairs of (malignant assignments) / (n_i n_j).
    """
    if t != 1:
        raise UnsupportedError("malignant counting enumerates pairs, so t must be 1")
    npaul = np.array([l.n_paulis for l in exrec.locations], np.int64)
    s = int(npaul.sum())
    assignments = (s * s - int((npaul ** 2).sum())) // 2
    if assignments > cap:
        raise ResourceLimitError(f"{assignments} assignments exceed the enumeration cap {cap}")
    eng = FrameEngine(exrec)
    n = npaul.size

    def work(block):
        la, lb, ca, cb = block
        P = la.size
        cols = np.arange(P)
        res = eng.run(P, (np.concatenate([cols, cols]), np.concatenate([la, lb]), np.concatenate([ca, cb])))
        fail = exrec_failures(exrec, res) & ~res.rejected
        pair = la[fail] * n + lb[fail]
        return pair, fail.sum()

    blocks = _pair_blocks(exrec, chunk)
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as ex:
            parts = list(ex.map(work, blocks))
    else:
        parts = [work(b) for b in blocks]
    pairs = np.concatenate([p[0] for p in parts]) if parts else np.zeros(0, np.int64)
    uniq, cnt = np.unique(pairs, return_counts=True)
    a, b = np.divmod(uniq, n)
    c_pred = float(np.sum(cnt / (npaul[a] * npaul[b])))
    singles = single_fault_failures(exrec)[2]
    return MalignantCount(n, count_fault_sets(n, t), int(uniq.size), int(cnt.sum()), assignments,
                          c_pred, singles)
