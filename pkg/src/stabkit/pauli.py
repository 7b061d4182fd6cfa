"""n-qubit Pauli operators in the binary symplectic picture, plus GF(4).

A Pauli is ``i**phase`` times a tensor product of single-qubit factors
sigma(x_j, z_j), where sigma(1, 0) = X, sigma(0, 1) = Z and sigma(1, 1) = Y.
Qubit 0 is the leftmost factor.
"""
from __future__ import annotations

import itertools
import numpy as np

from .errors import DimensionError, ParseError

_CHARS = "IXZY"  # index = x + 2 z
_CODE = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_PREFIX = {"": 0, "+": 0, "+i": 1, "i": 1, "-": 2, "-i": 3}
_PREFIX_OUT = {0: "+", 1: "+i", 2: "-", 3: "-i"}


def _bits(v):
    a = np.array(v, dtype=np.uint8).reshape(-1) & 1
    a.setflags(write=False)
    return a


def product_phase(x1, z1, x2, z2):
    """Exponent of i picked up when multiplying factor-wise sigma(x1,z1) sigma(x2,z2).

    Works elementwise on arrays and returns the total mod 4.
    """
    x1 = np.asarray(x1, dtype=np.int64)
    z1 = np.asarray(z1, dtype=np.int64)
    x2 = np.asarray(x2, dtype=np.int64)
    z2 = np.asarray(z2, dtype=np.int64)
    # power of i picked up when multiplying single-qubit Paulis (x1,z1)(x2,z2)
    g = np.where(
        (x1 == 1) & (z1 == 1), z2 - x2,
        np.where((x1 == 1) & (z1 == 0), z2 * (2 * x2 - 1),
                 np.where((x1 == 0) & (z1 == 1), x2 * (1 - 2 * z2), 0)))
    return int(np.sum(g, axis=-1)) % 4 if g.ndim <= 1 else np.sum(g, axis=-1) % 4


class PauliOperator:
    """Immutable n-qubit Pauli operator."""

    __slots__ = ("x", "z", "phase")

    def __init__(self, x, z, phase=0):
        x = _bits(x)
        z = _bits(z)
        if x.shape != z.shape:
            raise DimensionError("x and z bit vectors differ in length")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "phase", int(phase) % 4)

    def __setattr__(self, name, value):
        raise AttributeError("PauliOperator is immutable")

    # construction
    @classmethod
    def identity(cls, n):
        return cls(np.zeros(n, np.uint8), np.zeros(n, np.uint8))

    @classmethod
    def single(cls, n, qubit, kind):
        x = np.zeros(n, np.uint8)
        z = np.zeros(n, np.uint8)
        x[qubit], z[qubit] = _CODE[kind]
        return cls(x, z)

    @classmethod
    def from_string(cls, s):
        s = s.strip()
        body = s.lstrip("+-i")
        prefix = s[: len(s) - len(body)]
        if prefix not in _PREFIX or any(c not in _CODE for c in body):
            raise ParseError(f"bad Pauli string {s!r}")
        x = [_CODE[c][0] for c in body]
        z = [_CODE[c][1] for c in body]
        return cls(x, z, _PREFIX[prefix])

    @classmethod
    def from_symplectic(cls, v, phase=0):
        v = np.asarray(v)
        n = v.shape[0] // 2
        return cls(v[:n], v[n:], phase)

    # views
    @property
    def n(self):
        return self.x.shape[0]

    @property
    def weight(self):
        return int(np.count_nonzero(self.x | self.z))

    @property
    def support(self):
        return tuple(int(i) for i in np.nonzero(self.x | self.z)[0])

    @property
    def is_hermitian(self):
        return self.phase % 2 == 0

    @property
    def sign_bit(self):
        """1 when the operator is -(factors); only meaningful for Hermitian ones."""
        return self.phase // 2

    def symplectic(self):
        return np.concatenate([self.x, self.z])

    def letters(self):
        return "".join(_CHARS[a + 2 * b] for a, b in zip(self.x, self.z))

    def __str__(self):
        return _PREFIX_OUT[self.phase] + self.letters()

    def __repr__(self):
        return f"PauliOperator({str(self)!r})"

    def __eq__(self, other):
        return (isinstance(other, PauliOperator) and self.phase == other.phase
                and np.array_equal(self.x, other.x) and np.array_equal(self.z, other.z))

    def __hash__(self):
        return hash((self.x.tobytes(), self.z.tobytes(), self.phase))

    def __mul__(self, other):
        return multiply(self, other)

    def __neg__(self):
        return PauliOperator(self.x, self.z, self.phase + 2)

    def without_phase(self):
        return PauliOperator(self.x, self.z, 0)

    def adjoint(self):
        # factors are Hermitian, so only the scalar conjugates
        return PauliOperator(self.x, self.z, -self.phase)

    def commutes(self, other):
        return commutes(self, other)

    def restrict(self, qubits):
        q = list(qubits)
        return PauliOperator(self.x[q], self.z[q], 0)

    def to_matrix(self):
        mats = {(0, 0): np.eye(2), (1, 0): np.array([[0, 1], [1, 0]]),
                (0, 1): np.diag([1, -1]), (1, 1): np.array([[0, -1j], [1j, 0]])}
        out = np.array([[1j ** self.phase]], dtype=complex)
        for a, b in zip(self.x, self.z):
            out = np.kron(out, mats[(int(a), int(b))])
        return out


def _check(p, q):
    if p.n != q.n:
        raise DimensionError(f"Pauli lengths differ: {p.n} vs {q.n}")


def multiply(p, q):
    """Phase-exact product p*q."""
    _check(p, q)
    ph = p.phase + q.phase + product_phase(p.x, p.z, q.x, q.z)
    return PauliOperator(p.x ^ q.x, p.z ^ q.z, ph)


def symplectic_product(p, q):
    _check(p, q)
    return int((np.dot(p.x, q.z) + np.dot(p.z, q.x)) % 2)


def commutes(p, q):
    return symplectic_product(p, q) == 0


def weight(p):
    return p.weight


def paulis_of_weight(n, w):
    """All phase-free Paulis of exactly weight w, in lexicographic string order (I<X<Y<Z)."""
    out = []
    for supp in itertools.combinations(range(n), w):
        for kinds in itertools.product("XYZ", repeat=w):
            s = ["I"] * n
            for q, k in zip(supp, kinds):
                s[q] = k
            out.append("".join(s))
    out.sort()
    return [PauliOperator.from_string(s) for s in out]


def paulis_up_to_weight(n, w):
    out = []
    for j in range(w + 1):
        out.extend(paulis_of_weight(n, j))
    return out


# ---------------------------------------------------------------- GF(4)
# Elements are stored as 2-bit integers a + 2b meaning a + b*omega, so
# 0 -> 0, 1 -> 1, omega -> 2, omega^2 = 1 + omega -> 3.  Addition is XOR.

ZERO, ONE, OMEGA, OMEGA2 = 0, 1, 2, 3
_LOG = {1: 0, 2: 1, 3: 2}
_EXP = [1, 2, 3]
_NAMES = {0: "0", 1: "1", 2: "w", 3: "w2"}


def gf4_mul(a, b):
    if a == 0 or b == 0:
        return 0
    return _EXP[(_LOG[a] + _LOG[b]) % 3]


def gf4_conj(a):
    """Frobenius conjugation a -> a^2 (swaps omega and omega^2)."""
    return {0: 0, 1: 1, 2: 3, 3: 2}[a]


def gf4_trace(a):
    """tr(a) = a + a^2; equals 1 exactly for omega and omega^2."""
    return a >> 1


class GF4Vector:
    """Immutable vector over GF(4)."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        e = np.array(entries, dtype=np.uint8).reshape(-1)
        if np.any(e > 3):
            raise ValueError("GF(4) entries must be in 0..3")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    def __setattr__(self, name, value):
        raise AttributeError("GF4Vector is immutable")

    def __len__(self):
        return self.entries.shape[0]

    def __add__(self, other):
        if len(self) != len(other):
            raise DimensionError("GF(4) vector lengths differ")
        return GF4Vector(self.entries ^ other.entries)

    def scale(self, c):
        return GF4Vector([gf4_mul(c, int(a)) for a in self.entries])

    def conj(self):
        return GF4Vector([gf4_conj(int(a)) for a in self.entries])

    def __eq__(self, other):
        return isinstance(other, GF4Vector) and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash(self.entries.tobytes())

    def __repr__(self):
        return "GF4Vector(" + ",".join(_NAMES[int(a)] for a in self.entries) + ")"


def gf4_encode(p):
    """I->0, Z->1, X->omega, Y->omega^2; the phase is dropped."""
    return GF4Vector(p.z.astype(np.uint8) + 2 * p.x.astype(np.uint8))


def gf4_decode(v):
    e = v.entries
    return PauliOperator(e >> 1, e & 1)


def trace_inner(u, v):
    """sum_i tr(u_i * conj(v_i)) mod 2; zero iff the matching Paulis commute."""
    if len(u) != len(v):
        raise DimensionError("GF(4) vector lengths differ")
    s = 0
    for a, b in zip(u.entries, v.entries):
        s ^= gf4_trace(gf4_mul(int(a), gf4_conj(int(b))))
    return s


def basis_masks(p):
    """Integer masks of x and z bits with qubit 0 as the most significant bit."""
    n = p.n
    weights = 1 << np.arange(n - 1, -1, -1, dtype=np.int64)
    return int(np.dot(p.x, weights)), int(np.dot(p.z, weights))


def apply_to_state(p, psi):
    """Return p|psi> for a dense state vector of length 2**n."""
    n = p.n
    if psi.shape[0] != 1 << n:
        raise DimensionError("state length does not match Pauli length")
    xm, zm = basis_masks(p)
    idx = np.arange(1 << n, dtype=np.int64)
    par = np.zeros_like(idx)
    t = idx & zm
    while np.any(t):
        par ^= t & 1
        t >>= 1
    ny = int(np.count_nonzero(p.x & p.z))
    coef = (1j ** ((p.phase + ny) % 4)) * (1 - 2 * par)
    out = np.empty_like(psi, dtype=complex)
    out[idx ^ xm] = coef * psi
    return out


def lex_digits(n, w):
    """Digit matrix (I=0, X=1, Y=2, Z=3) of all weight-w strings, rows in lexicographic order."""
    import itertools as it
    if w == 0:
        return np.zeros((1, n), dtype=np.uint8)
    supports = np.array(list(it.combinations(range(n), w)), dtype=np.int64)
    kinds = np.array(list(it.product((1, 2, 3), repeat=w)), dtype=np.uint8)
    rows = np.zeros((supports.shape[0] * kinds.shape[0], n), dtype=np.uint8)
    r = np.repeat(np.arange(supports.shape[0]), kinds.shape[0])
    k = np.tile(np.arange(kinds.shape[0]), supports.shape[0])
    rows[np.arange(rows.shape[0])[:, None], supports[r]] = kinds[k]
    order = np.lexsort(rows.T[::-1])
    return rows[order]


def digits_to_xz(d):
    d = np.asarray(d)
    x = ((d == 1) | (d == 2)).astype(np.uint8)
    z = ((d == 2) | (d == 3)).astype(np.uint8)
    return x, z
