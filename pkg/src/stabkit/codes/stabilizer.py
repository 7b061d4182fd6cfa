"""Stabilizer codes: validation, syndromes, distance, logical operators, decoding."""
from __future__ import annotations

import numpy as np

from .. import gf2
from ..errors import DimensionError, ResourceLimitError
from ..pauli import PauliOperator, multiply, commutes, lex_digits, digits_to_xz

ENUMERATION_LIMIT = 16  # qubits; exhaustive Pauli enumeration above this is refused
_BATCH_CAP = 5_000_000


class StabilizerCode:
    """A stabilizer code given by generators, optionally with logical representatives."""

    def __init__(self, generators, logical_x=None, logical_z=None, name=""):
        gens = [g if isinstance(g, PauliOperator) else PauliOperator.from_string(g)
                for g in generators]
        self._n = None
        for g in gens:
            if self._n is None:
                self._n = g.n
            elif g.n != self._n:
                raise DimensionError("generators have different lengths")
        self.generators = tuple(gens)
        self.name = name
        self._lx = None if logical_x is None else tuple(
            p if isinstance(p, PauliOperator) else PauliOperator.from_string(p) for p in logical_x)
        self._lz = None if logical_z is None else tuple(
            p if isinstance(p, PauliOperator) else PauliOperator.from_string(p) for p in logical_z)
        self._cache = {}

    @classmethod
    def empty(cls, n, name=""):
        code = cls([], name=name)
        code._n = n
        return code

    # ---- basic parameters
    @property
    def n(self):
        if self._n is None:
            raise DimensionError("code with no generators needs an explicit n")
        return self._n

    @property
    def a(self):
        return len(self.generators)

    @property
    def k(self):
        return self.n - self.a

    @property
    def gx(self):
        if "gx" not in self._cache:
            self._cache["gx"] = np.array([g.x for g in self.generators], np.uint8).reshape(self.a, self.n)
            self._cache["gz"] = np.array([g.z for g in self.generators], np.uint8).reshape(self.a, self.n)
        return self._cache["gx"]

    @property
    def gz(self):
        self.gx
        return self._cache["gz"]

    def check_matrix(self):
        """a x 2n matrix of generator symplectic vectors, (x|z) order."""
        return np.hstack([self.gx, self.gz])

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<StabilizerCode{label} [[{self.n},{self.k}]]>"

    # ---- CSS structure
    @property
    def is_css(self):
        return all(not g.z.any() or not g.x.any() for g in self.generators)

    def css_checks(self):
        """(hx, hz): supports of the X-type and Z-type generators."""
        hx = np.array([g.x for g in self.generators if g.x.any()], np.uint8).reshape(-1, self.n)
        hz = np.array([g.z for g in self.generators if not g.x.any()], np.uint8).reshape(-1, self.n)
        return hx, hz

    # ---- syndromes
    def syndrome(self, e):
        if e.n != self.n:
            raise DimensionError("error length does not match code length")
        return ((self.gx @ e.z + self.gz @ e.x) % 2).astype(np.uint8)

    def syndromes(self, x, z):
        """Batch syndromes for rows of x, z (shape (B, n)) -> (B, a) bits."""
        x = np.asarray(x, dtype=np.int64)
        z = np.asarray(z, dtype=np.int64)
        return ((z @ self.gx.T.astype(np.int64) + x @ self.gz.T.astype(np.int64)) & 1).astype(np.uint8)

    def syndrome_index(self, bits):
        """Pack syndrome bit rows into integers (generator 0 is bit 0)."""
        bits = np.asarray(bits, dtype=np.int64)
        return bits @ (1 << np.arange(self.a, dtype=np.int64))

    def error_for_syndrome(self, v):
        """Lexicographically least (x|z) solution of the syndrome equations."""
        v = np.asarray(v, dtype=np.uint8)
        if v.shape != (self.a,):
            raise DimensionError(f"syndrome must have length {self.a}")
        m = np.hstack([self.gz, self.gx])  # row i dotted with (x|z) gives bit i
        sol = gf2.solve_lexmin(m, v)
        if sol is None:
            raise ValueError("syndrome not realizable; generators are dependent")
        return PauliOperator(sol[: self.n], sol[self.n:])

    # ---- stabilizer membership
    def _stab_space(self):
        if "ss" not in self._cache:
            self._cache["ss"] = gf2.RowSpace(self.check_matrix().reshape(self.a, 2 * self.n))
        return self._cache["ss"]

    def in_stabilizer(self, x, z):
        """Batch test: rows of (x|z) in the stabilizer group, ignoring phase."""
        x = np.atleast_2d(x)
        z = np.atleast_2d(z)
        return self._stab_space().contains(np.hstack([x, z]))

    def validate(self):
        """List of human-readable violations; empty means a valid stabilizer group."""
        out = []
        gens = self.generators
        for i, g in enumerate(gens):
            if not g.is_hermitian:
                out.append(f"generator {i} ({g}) is not Hermitian")
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                if not commutes(gens[i], gens[j]):
                    out.append(f"generators {i} ({gens[i]}) and {j} ({gens[j]}) anticommute")
        if self.a:
            for dep in gf2.nullspace(self.check_matrix().T.copy(), self.a):
                prod = PauliOperator.identity(self.n)
                for i in np.nonzero(dep)[0]:
                    prod = multiply(prod, gens[i])
                idx = [int(i) for i in np.nonzero(dep)[0]]
                if prod.phase == 2:
                    out.append(f"product of generators {idx} is -identity")
                else:
                    out.append(f"generators {idx} are dependent (product {prod})")
        if self._lx is not None or self._lz is not None:
            out.extend(_check_logicals(self, self._lx or (), self._lz or ()))
        return out

    # ---- enumeration helpers
    def _weight_batches(self, max_weight=None):
        n = self.n
        if n > ENUMERATION_LIMIT:
            raise ResourceLimitError(f"exhaustive enumeration refused for n={n} > {ENUMERATION_LIMIT}")
        top = n if max_weight is None else min(n, max_weight)
        for w in range(top + 1):
            d = lex_digits(n, w)
            if d.shape[0] > _BATCH_CAP:
                raise ResourceLimitError("enumeration batch too large")
            x, z = digits_to_xz(d)
            yield w, x, z

    def distance(self):
        """Minimum weight of N(S) minus S (of S minus identity when k = 0)."""
        if "d" in self._cache:
            return self._cache["d"]
        for w, x, z in self._weight_batches():
            if w == 0:
                continue
            ok = ~np.any(self.syndromes(x, z), axis=1) if self.a else np.ones(x.shape[0], bool)
            if self.k > 0 and self.a:
                ok &= ~self.in_stabilizer(x, z)
            if ok.any():
                self._cache["d"] = w
                return w
        raise ValueError("no nontrivial normalizer element found")

    def decoding_table(self):
        """Minimum-weight (lexicographic tie-break) Pauli for each syndrome index.

        Returns (tx, tz) arrays of shape (2**a, n).
        """
        if "table" in self._cache:
            return self._cache["table"]
        size = 1 << self.a
        tx = np.zeros((size, self.n), np.uint8)
        tz = np.zeros((size, self.n), np.uint8)
        filled = np.zeros(size, bool)
        try:
            for w, x, z in self._weight_batches():
                idx = self.syndrome_index(self.syndromes(x, z)) if self.a else np.zeros(x.shape[0], np.int64)
                uniq, first = np.unique(idx, return_index=True)
                new = ~filled[uniq]
                tx[uniq[new]] = x[first[new]]
                tz[uniq[new]] = z[first[new]]
                filled[uniq[new]] = True
                if filled.all():
                    break
        except ResourceLimitError:
            pass
        for s in np.nonzero(~filled)[0]:
            bits = (int(s) >> np.arange(self.a)) & 1
            e = self.error_for_syndrome(bits.astype(np.uint8))
            tx[s], tz[s] = e.x, e.z
        self._cache["table"] = (tx, tz)
        return tx, tz

    def correction_for(self, e):
        tx, tz = self.decoding_table()
        s = int(self.syndrome_index(self.syndrome(e)[None, :])[0]) if self.a else 0
        return PauliOperator(tx[s], tz[s])

    # ---- logical operators
    @property
    def logical_x(self):
        if self._lx is None:
            self._lx, self._lz = find_logical_operators(self)
        return self._lx

    @property
    def logical_z(self):
        if self._lz is None:
            self._lx, self._lz = find_logical_operators(self)
        return self._lz

    def logical_matrices(self):
        """(lxx, lxz, lzx, lzz) arrays of shape (k, n)."""
        if "lm" not in self._cache:
            lx, lz = self.logical_x, self.logical_z
            mk = lambda ps, f: np.array([getattr(p, f) for p in ps], np.uint8).reshape(len(ps), self.n)
            self._cache["lm"] = (mk(lx, "x"), mk(lx, "z"), mk(lz, "x"), mk(lz, "z"))
        return self._cache["lm"]

    def logical_class(self, x, z):
        """Logical content of normalizer elements (batch).

        Returns (lx_bits, lz_bits) of shape (B, k): the element equals
        prod X_i^lx_i Z_i^lz_i modulo the stabilizer (and phase).
        """
        x = np.atleast_2d(np.asarray(x, dtype=np.int64))
        z = np.atleast_2d(np.asarray(z, dtype=np.int64))
        lxx, lxz, lzx, lzz = (m.astype(np.int64) for m in self.logical_matrices())
        # anticommutation with Z_i reveals an X_i component and vice versa
        ax = (x @ lzz.T + z @ lzx.T) & 1
        az = (x @ lxz.T + z @ lxx.T) & 1
        return ax.astype(np.uint8), az.astype(np.uint8)

    def ideal_decode(self, x, z):
        """Perfect decoder on frames (batch): logical class after min-weight correction."""
        x = np.atleast_2d(np.asarray(x, np.uint8))
        z = np.atleast_2d(np.asarray(z, np.uint8))
        tx, tz = self.decoding_table()
        s = self.syndrome_index(self.syndromes(x, z)) if self.a else np.zeros(x.shape[0], np.int64)
        return self.logical_class(x ^ tx[s], z ^ tz[s])

    def star_decode(self, x, z):
        """Decoder that also reports the syndrome: (lx bits, lz bits, syndrome bits)."""
        x = np.atleast_2d(np.asarray(x, np.uint8))
        z = np.atleast_2d(np.asarray(z, np.uint8))
        ax, az = self.ideal_decode(x, z)
        return ax, az, self.syndromes(x, z)

    def coset_min_weight(self, x, z):
        """Minimum weight over the coset E*N(S), i.e. of the syndrome class (batch)."""
        tx, tz = self.decoding_table()
        x = np.atleast_2d(x)
        z = np.atleast_2d(z)
        s = self.syndrome_index(self.syndromes(x, z)) if self.a else np.zeros(x.shape[0], np.int64)
        return np.count_nonzero(tx[s] | tz[s], axis=1)

    def reduce_mod_stabilizer(self, e):
        """Minimum-weight representative of e*S (ties lexicographic), phase dropped."""
        best = None
        key = None
        a = self.a
        if a > 20:
            raise ResourceLimitError("stabilizer group too large to enumerate")
        gx, gz = self.gx, self.gz
        combos = ((np.arange(1 << a)[:, None] >> np.arange(a)) & 1).astype(np.int64)
        xs = (e.x[None, :] + combos @ gx) & 1
        zs = (e.z[None, :] + combos @ gz) & 1
        w = np.count_nonzero(xs | zs, axis=1)
        digits = xs + zs * 2
        digits = np.where(digits == 2, 3, np.where(digits == 3, 2, digits))  # I,X,Y,Z order
        cand = np.nonzero(w == w.min())[0]
        order = np.lexsort(digits[cand].T[::-1])
        i = cand[order[0]]
        return PauliOperator(xs[i], zs[i])


def _check_logicals(code, lx, lz):
    out = []
    if len(lx) != len(lz):
        out.append("logical X and Z lists have different lengths")
        return out
    if code._n is not None and len(lx) != code.k:
        out.append(f"expected {code.k} logical pairs, got {len(lx)}")
    for i, p in enumerate(list(lx) + list(lz)):
        for j, g in enumerate(code.generators):
            if not commutes(p, g):
                out.append(f"logical {p} anticommutes with generator {j}")
    for i in range(len(lx)):
        for j in range(len(lz)):
            want = i != j
            if commutes(lx[i], lz[j]) != want:
                out.append(f"logical X{i} / Z{j} commutation is wrong")
        for j in range(i + 1, len(lx)):
            if not commutes(lx[i], lx[j]) or not commutes(lz[i], lz[j]):
                out.append(f"logicals {i} and {j} of the same type anticommute")
    return out


def _symp(x, z, px, pz):
    """Batch symplectic products of rows (x, z) against a single Pauli."""
    return ((x.astype(np.int64) @ pz + z.astype(np.int64) @ px) & 1).astype(bool)


def find_logical_operators(code):
    """Minimum-weight logical pairs, chosen greedily in (weight, lexicographic) order."""
    n, k = code.n, code.k
    lx, lz = [], []
    for _ in range(k):
        rows = [np.concatenate([g.x, g.z]) for g in code.generators]
        rows += [p.symplectic() for p in lx + lz]
        space = gf2.RowSpace(np.array(rows, np.uint8).reshape(len(rows), 2 * n))
        xi = zi = None
        for w, x, z in code._weight_batches():
            if w == 0:
                continue
            ok = ~np.any(code.syndromes(x, z), axis=1) if code.a else np.ones(x.shape[0], bool)
            for p in lx + lz:
                ok &= ~_symp(x, z, p.x.astype(np.int64), p.z.astype(np.int64))
            if xi is None:
                free = ok & ~space.contains(np.hstack([x, z]))
                if free.any():
                    i = np.nonzero(free)[0][0]
                    xi = PauliOperator(x[i], z[i])
            if xi is not None:
                anti = ok & _symp(x, z, xi.x.astype(np.int64), xi.z.astype(np.int64))
                if anti.any():
                    i = np.nonzero(anti)[0][0]
                    zi = PauliOperator(x[i], z[i])
                    break
        lx.append(xi)
        lz.append(zi)
    return tuple(lx), tuple(lz)


def normalizer_coset_count(code):
    """|N(S)/S| with the four global phases included, by enumerating all Paulis."""
    reps = set()
    for w, x, z in code._weight_batches():
        ok = ~np.any(code.syndromes(x, z), axis=1) if code.a else np.ones(x.shape[0], bool)
        space = code._stab_space()
        red = space.reduce(np.hstack([x[ok], z[ok]]))
        reps.update(r.tobytes() for r in red)
    return 4 * len(reps)
