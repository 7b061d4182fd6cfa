"""Independent dense-matrix oracles used by the tests (no library code)."""
from functools import reduce

import numpy as np

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.diag([1, -1]).astype(complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
S = np.diag([1, 1j])
SINGLE = {"I": I2, "X": X, "Y": Y, "Z": Z}


def pauli_matrix(s):
    """Matrix of a Pauli string with optional +/-/i prefix."""
    sign = 1
    body = s
    for pre, val in (("-i", -1j), ("+i", 1j), ("i", 1j), ("-", -1), ("+", 1)):
        if s.startswith(pre):
            sign, body = val, s[len(pre):]
            break
    return sign * reduce(np.kron, [SINGLE[c] for c in body], np.eye(1, dtype=complex))


def embed(u, qubits, n):
    """Full 2^n matrix of a k-qubit gate on ``qubits`` (qubit 0 most significant)."""
    k = len(qubits)
    dim = 1 << n
    out = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        bits = [(col >> (n - 1 - q)) & 1 for q in range(n)]
        sub = 0
        for q in qubits:
            sub = (sub << 1) | bits[q]
        for r in range(1 << k):
            amp = u[r, sub]
            if amp == 0:
                continue
            nb = list(bits)
            for j, q in enumerate(qubits):
                nb[q] = (r >> (k - 1 - j)) & 1
            row = 0
            for b in nb:
                row = (row << 1) | b
            out[row, col] += amp
    return out


CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def commute_by_matrix(a, b):
    ma, mb = pauli_matrix(a), pauli_matrix(b)
    return np.allclose(ma @ mb, mb @ ma)


def equal_up_to_phase(a, b, tol=1e-9):
    i = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(b[i]) < tol:
        return np.allclose(a, 0, atol=tol)
    ph = a[i] / b[i]
    return abs(abs(ph) - 1) < tol and np.allclose(a, ph * b, atol=tol)
