"""Batched Pauli-frame propagation.

Frames are uint8 arrays of shape (n_qubits, batch); each column is one
fault pattern.  Propagation is exact for Clifford circuits: the frame
records the deviation of the faulty run from the fault-free reference run,
and measurement records hold outcome flips.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import UnsupportedError
from .circuit import (MEAS, PREP, GATE1, GATE2, WAIT, FeedForward, Postselect, Readout,
                      Checkpoint, ConditionalGates)


def apply_frame_gate(name, x, z, qs):
    """Conjugate frames by a layer of identical gates.

    ``qs`` is an int array of qubits (one-qubit gates) or an (m, 2) array
    of (control, target) pairs.
    """
    if name == "H":
        tmp = x[qs].copy()
        x[qs] = z[qs]
        z[qs] = tmp
    elif name in ("P", "PDG"):
        z[qs] ^= x[qs]
    elif name == "CNOT":
        c, t = qs[:, 0], qs[:, 1]
        x[t] ^= x[c]
        z[c] ^= z[t]
    elif name == "CZ":
        c, t = qs[:, 0], qs[:, 1]
        z[c] ^= x[t]
        z[t] ^= x[c]
    elif name == "CY":
        c, t = qs[:, 0], qs[:, 1]
        z[c] ^= x[t] ^ z[t]
        x[t] ^= x[c]
        z[t] ^= x[c]
    elif name in ("X", "Y", "Z", "I"):
        pass
    else:
        raise UnsupportedError(f"gate {name} cannot be tracked by Pauli frames")


@dataclass
class _Moment:
    layers: list = field(default_factory=list)    # (gate name, qubit array)
    preps: np.ndarray = None
    mz_q: np.ndarray = None
    mz_r: np.ndarray = None
    mx_q: np.ndarray = None
    mx_r: np.ndarray = None


@dataclass
class FrameResult:
    x: np.ndarray
    z: np.ndarray
    records: np.ndarray
    rejected: np.ndarray
    rejected_by: dict
    checkpoints: dict
    readouts: dict

    def block(self, qubits):
        q = list(qubits)
        return self.x[q].T, self.z[q].T


class FrameEngine:
    """Compiled frame simulator for one circuit."""

    def __init__(self, circuit):
        if not circuit.is_clifford():
            raise UnsupportedError("circuit contains non-Clifford elements; use the dense executor")
        self.circuit = circuit
        self.moments = []
        by_t = [[] for _ in range(circuit.n_moments)]
        for loc in circuit.locations:
            by_t[loc.time].append(loc)
        for locs in by_t:
            m = _Moment()
            gates = {}
            mz, mx, preps = [], [], []
            for loc in locs:
                if loc.kind == PREP:
                    preps.append(loc.qubits[0])
                elif loc.kind == MEAS:
                    (mz if loc.op == "Z" else mx).append((loc.qubits[0], loc.record))
                elif loc.kind in (GATE1, GATE2):
                    gates.setdefault(loc.op, []).append(loc.qubits)
            for name, qs in sorted(gates.items()):
                arr = np.array(qs, dtype=np.int64)
                m.layers.append((name, arr[:, 0] if arr.shape[1] == 1 else arr))
            m.preps = np.array(preps, dtype=np.int64)
            m.mz_q = np.array([a for a, _ in mz], dtype=np.int64)
            m.mz_r = np.array([b for _, b in mz], dtype=np.int64)
            m.mx_q = np.array([a for a, _ in mx], dtype=np.int64)
            m.mx_r = np.array([b for _, b in mx], dtype=np.int64)
            self.moments.append(m)
        self.classical_at = {}
        for c in circuit.classical:
            self.classical_at.setdefault(c.time, []).append(c)
        # indexed by location id (sub-circuits keep the ids of their parent)
        size = max((l.id for l in circuit.locations), default=-1) + 1
        self.loc_time = np.zeros(size, np.int64)
        self.loc_before = np.zeros(size, np.int64)
        self.loc_q0 = np.zeros(size, np.int64)
        self.loc_q1 = np.full(size, -1, np.int64)
        for l in circuit.locations:
            self.loc_time[l.id] = l.time
            self.loc_before[l.id] = l.kind == MEAS
            self.loc_q0[l.id] = l.qubits[0]
            if len(l.qubits) > 1:
                self.loc_q1[l.id] = l.qubits[1]

    def expand_faults(self, pat, loc, code):
        """Flatten (pattern, location, Pauli code) triples to per-qubit entries sorted by time."""
        pat = np.asarray(pat, dtype=np.int64)
        loc = np.asarray(loc, dtype=np.int64)
        code = np.asarray(code, dtype=np.int64)
        two = self.loc_q1[loc] >= 0
        q = np.concatenate([self.loc_q0[loc], self.loc_q1[loc][two]])
        c = np.concatenate([code & 3, (code[two] >> 2) & 3])
        p = np.concatenate([pat, pat[two]])
        l = np.concatenate([loc, loc[two]])
        key = self.loc_time[l] * 2 + (1 - self.loc_before[l])
        order = np.argsort(key, kind="stable")
        return key[order], q[order], p[order], (c[order] & 1).astype(np.uint8), (c[order] >> 1).astype(np.uint8)

    def run(self, batch, faults=None, inputs=None):
        """Propagate ``batch`` patterns.

        faults: optional (pattern idx, location id, Pauli code) arrays.
        inputs: optional {block name: (x, z)} with arrays of shape (batch, block size).
        """
        circ = self.circuit
        x = np.zeros((circ.n_physical, batch), np.uint8)
        z = np.zeros((circ.n_physical, batch), np.uint8)
        rec = np.zeros((circ.n_records, batch), np.uint8)
        rejected = np.zeros(batch, bool)
        rejected_by = {}
        checkpoints = {}
        readouts = {}
        if inputs:
            for name, (ix, iz) in inputs.items():
                qs = list(circ.blocks[name])
                x[qs] = np.asarray(ix, np.uint8).T
                z[qs] = np.asarray(iz, np.uint8).T
        if faults is not None and len(faults[0]):
            key, fq, fp, fx, fz = self.expand_faults(*faults)
            bounds = np.searchsorted(key, np.arange(2 * circ.n_moments + 1))
        else:
            bounds = None
        for t, m in enumerate(self.moments):
            if bounds is not None:
                a, b = bounds[2 * t], bounds[2 * t + 1]
                if b > a:
                    x[fq[a:b], fp[a:b]] ^= fx[a:b]
                    z[fq[a:b], fp[a:b]] ^= fz[a:b]
            if m.mz_q.size:
                rec[m.mz_r] = x[m.mz_q]
            if m.mx_q.size:
                rec[m.mx_r] = z[m.mx_q]
            if m.preps.size:
                x[m.preps] = 0
                z[m.preps] = 0
            for name, qs in m.layers:
                apply_frame_gate(name, x, z, qs)
            if bounds is not None:
                a, b = bounds[2 * t + 1], bounds[2 * t + 2]
                if b > a:
                    x[fq[a:b], fp[a:b]] ^= fx[a:b]
                    z[fq[a:b], fp[a:b]] ^= fz[a:b]
            for c in self.classical_at.get(t, ()):
                if isinstance(c, FeedForward):
                    cx, cz = c.decoder(rec[list(c.inputs)].T)
                    tq = list(c.targets)
                    x[tq] ^= cx.T.astype(np.uint8)
                    z[tq] ^= cz.T.astype(np.uint8)
                elif isinstance(c, Postselect):
                    bad = np.any((c.checks.astype(np.int64) @ rec[list(c.inputs)].astype(np.int64)) & 1, axis=0)
                    rejected_by[c.factory] = rejected_by.get(c.factory, np.zeros(batch, bool)) | bad
                    rejected |= bad
                elif isinstance(c, Readout):
                    readouts[c.name] = c.decoder(rec[list(c.inputs)].T)
                elif isinstance(c, Checkpoint):
                    qs = list(c.qubits)
                    checkpoints[c.name] = (x[qs].T.copy(), z[qs].T.copy())
                elif isinstance(c, ConditionalGates):
                    raise UnsupportedError("conditional gates need the dense executor")
        return FrameResult(x, z, rec, rejected, rejected_by, checkpoints, readouts)


def propagate(circuit, faults, inputs=None):
    """Propagate one FaultPattern; returns per-block residual frames and the flip record.

    ``inputs`` maps block names to PauliOperators applied before the circuit.
    """
    from .circuit import pauli_code_of
    from ..pauli import PauliOperator
    eng = FrameEngine(circuit)
    pats = [0] * len(faults.faults)
    locs = [lid for lid, _ in faults.faults]
    codes = [pauli_code_of(p) for _, p in faults.faults]
    ins = None
    if inputs:
        ins = {b: (p.x[None, :], p.z[None, :]) for b, p in inputs.items()}
    res = eng.run(1, (pats, locs, codes), ins)
    blocks = {name: PauliOperator(res.x[list(qs), 0], res.z[list(qs), 0])
              for name, qs in circuit.blocks.items()}
    return blocks, res.records[:, 0].copy(), bool(res.rejected[0]), {
        k: v[0] if getattr(v, "ndim", 0) else v for k, v in res.readouts.items()}
