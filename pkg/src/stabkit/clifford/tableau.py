"""Stabilizer tableau with destabilizer rows (CHP-style simulation)."""
import numpy as np

from ..errors import DimensionError, UnsupportedError
from ..pauli import PauliOperator
from .instructions import Gate, MeasurePauli, Prep, Wait


class Tableau:
    """Rows 0..n-1 are destabilizers, rows n..2n-1 stabilizers.

    Bits are stored qubit-major: ``x[q, row]``.  A row denotes
    (-1)^r times the product of its single-qubit factors.
    """

    def __init__(self, n):
        self.n = n
        self.x = np.zeros((n, 2 * n), np.uint8)
        self.z = np.zeros((n, 2 * n), np.uint8)
        self.r = np.zeros(2 * n, np.uint8)
        idx = np.arange(n)
        self.x[idx, idx] = 1
        self.z[idx, idx + n] = 1

    def copy(self):
        t = Tableau.__new__(Tableau)
        t.n = self.n
        t.x, t.z, t.r = self.x.copy(), self.z.copy(), self.r.copy()
        return t

    # ---- gates
    def h(self, q):
        x, z = self.x[q], self.z[q]
        self.r ^= x & z
        self.x[q], self.z[q] = z.copy(), x.copy()

    def s(self, q):
        x, z = self.x[q], self.z[q]
        self.r ^= x & z
        z ^= x

    def cnot(self, c, t):
        xc, zc, xt, zt = self.x[c], self.z[c], self.x[t], self.z[t]
        self.r ^= xc & zt & (xt ^ zc ^ 1)
        xt ^= xc
        zc ^= zt

    def pauli(self, p):
        self.r ^= ((p.z @ self.x + p.x @ self.z) & 1).astype(np.uint8)

    def apply(self, g):
        k, q = g.kind, g.qubits
        if k == "H":
            self.h(q[0])
        elif k == "P":
            self.s(q[0])
        elif k == "PDG":
            for _ in range(3):
                self.s(q[0])
        elif k == "CNOT":
            self.cnot(*q)
        elif k == "CZ":
            self.h(q[1]); self.cnot(*q); self.h(q[1])
        elif k == "CY":
            for _ in range(3):
                self.s(q[1])
            self.cnot(*q)
            self.s(q[1])
        elif k in ("X", "Y", "Z"):
            self.pauli(PauliOperator.single(self.n, q[0], k))
        elif k == "I":
            pass
        else:
            raise UnsupportedError(f"gate {k} is not Clifford; use the dense engine")
        return self

    # ---- rows
    def _row(self, i):
        return PauliOperator(self.x[:, i], self.z[:, i], 2 * int(self.r[i]))

    def stabilizers(self):
        return [self._row(self.n + i) for i in range(self.n)]

    def destabilizers(self):
        return [self._row(i) for i in range(self.n)]

    def _rowmul(self, h, i):
        """row h <- row i * row h (phases assume the rows commute)."""
        from ..pauli import product_phase
        ph = 2 * int(self.r[h]) + 2 * int(self.r[i]) + product_phase(
            self.x[:, i], self.z[:, i], self.x[:, h], self.z[:, h])
        self.r[h] = (ph % 4) // 2
        self.x[:, h] ^= self.x[:, i]
        self.z[:, h] ^= self.z[:, i]

    def binary_matrix(self):
        """2n x 2n matrix whose rows are (x|z) of destabilizers then stabilizers."""
        return np.hstack([self.x.T, self.z.T])

    def is_symplectic(self):
        m = self.binary_matrix().astype(np.int64)
        n = self.n
        omega = np.block([[np.zeros((n, n), np.int64), np.eye(n, dtype=np.int64)],
                          [np.eye(n, dtype=np.int64), np.zeros((n, n), np.int64)]])
        return np.array_equal((m @ omega @ m.T) & 1, omega)

    # ---- measurement
    def measure(self, m, rng=None, forced=None):
        """Measure Hermitian Pauli m; returns (outcome in {+1,-1}, deterministic flag)."""
        from ..pauli import product_phase
        n = self.n
        if m.n != n:
            raise DimensionError("measured Pauli has wrong length")
        if not m.is_hermitian:
            raise ValueError("measured operator must be Hermitian")
        anti = ((m.z @ self.x + m.x @ self.z) & 1).astype(bool)
        stab_anti = np.nonzero(anti[n:])[0]
        if stab_anti.size:
            p = n + int(stab_anti[0])
            for i in np.nonzero(anti)[0]:
                if i != p:
                    self._rowmul(int(i), p)
            self.x[:, p - n] = self.x[:, p]
            self.z[:, p - n] = self.z[:, p]
            self.r[p - n] = self.r[p]
            if forced is None:
                bit = int(rng.integers(2))
            else:
                bit = 0 if forced == 1 else 1
            self.x[:, p] = m.x
            self.z[:, p] = m.z
            self.r[p] = (m.sign_bit + bit) % 2
            return (1 - 2 * bit), False
        # deterministic: multiply the stabilizers paired with anticommuting destabilizers
        sx = np.zeros(n, np.uint8)
        sz = np.zeros(n, np.uint8)
        ph = 0
        for i in np.nonzero(anti[:n])[0]:
            j = n + int(i)
            ph += 2 * int(self.r[j]) + product_phase(self.x[:, j], self.z[:, j], sx, sz)
            sx ^= self.x[:, j]
            sz ^= self.z[:, j]
        ph %= 4
        # scratch equals (-1)^(ph/2) * factors(m); m = (-1)^sign * factors
        bit = (ph // 2 + m.sign_bit) % 2
        return (1 - 2 * bit), True

    def prep(self, q, state="0", rng=None):
        """Reset qubit q: measure Z (sampled with rng, else the +1 branch), flip on -1."""
        z = PauliOperator.single(self.n, q, "Z")
        out, _ = self.measure(z, rng, forced=None if rng is not None else 1)
        if out == -1:
            self.pauli(PauliOperator.single(self.n, q, "X"))
        if state == "+":
            self.h(q)
        elif state != "0":
            raise ValueError("prep state must be '0' or '+'")


def apply_gate(t, g):
    """Apply g to tableau t in place and return it."""
    return t.apply(g)


def measure_pauli(t, m, rng, forced=None):
    out, _ = t.measure(m, rng, forced)
    return out, t


def run_tableau(instructions, n, rng, record=False):
    """Run an instruction list; returns (outcomes, deterministic flags, tableau[, snapshots])."""
    t = Tableau(n)
    outs, det, snaps = [], [], []
    for ins in instructions:
        if isinstance(ins, Gate):
            t.apply(ins)
        elif isinstance(ins, MeasurePauli):
            o, d = t.measure(ins.pauli, rng)
            outs.append(o)
            det.append(d)
            if record:
                snaps.append(t.stabilizers())
        elif isinstance(ins, Prep):
            t.prep(ins.qubit, ins.state, rng)
        elif isinstance(ins, Wait):
            pass
        else:
            raise TypeError(f"unknown instruction {ins!r}")
    if record:
        return outs, det, t, snaps
    return outs, det, t


def symplectic_of(gates, n):
    """2n x 2n binary matrix S with S (x|z)^T giving the conjugated Pauli."""
    t = Tableau(n)
    for g in gates:
        t.apply(g)
    return t.binary_matrix().T.copy()


def is_symplectic_matrix(s):
    s = np.asarray(s, np.int64)
    n = s.shape[0] // 2
    omega = np.block([[np.zeros((n, n), np.int64), np.eye(n, dtype=np.int64)],
                      [np.eye(n, dtype=np.int64), np.zeros((n, n), np.int64)]])
    return np.array_equal((s.T @ omega @ s) & 1, omega)
