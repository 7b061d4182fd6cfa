"""State-level execution of gadget circuits (tableau or dense state vector).

These executors run the actual quantum operations with actual measurement
outcomes, so they serve as an independent check of the Pauli-frame engine
and are the only way to run circuits with non-Clifford corrections.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..clifford.dense import DenseState
from ..clifford.instructions import Gate
from ..clifford.tableau import Tableau
from ..errors import UnsupportedError, ResourceLimitError
from ..pauli import PauliOperator
from .circuit import (PREP, GATE1, GATE2, MEAS, FeedForward, Postselect, Readout, Checkpoint,
                      ConditionalGates, pauli_of_code)


@dataclass
class Execution:
    state: object                       # Tableau or DenseState
    records: np.ndarray
    rejected: bool
    readouts: dict = field(default_factory=dict)
    measured: set = field(default_factory=set)


def _embed(n, qubits, x, z):
    fx = np.zeros(n, np.uint8)
    fz = np.zeros(n, np.uint8)
    fx[list(qubits)] = x
    fz[list(qubits)] = z
    return PauliOperator(fx, fz)


def prepare_logical_tableau(tab, qubits, code, state, rng):
    """Project the block onto the logical |0> or |+> by measuring and fixing with destabilizers."""
    from .gadgets import extended_code, destabilizers
    ext = extended_code(code, state)
    dx, dz = destabilizers(ext)
    n = tab.n
    fix = []
    for i, g in enumerate(ext.generators):
        e = _embed(n, qubits, g.x, g.z)
        out, _ = tab.measure(PauliOperator(e.x, e.z, g.phase), rng)
        if out == -1:
            fix.append(i)
    for i in fix:
        tab.pauli(_embed(n, qubits, dx[i], dz[i]))


class _Runner:
    def __init__(self, circuit, state, rng, faults, forced, pauli, measure, prep, gate):
        self.c = circuit
        self.rng = rng
        self.forced = forced or {}
        self.state = state
        self.pauli, self.measure_fn, self.prep_fn, self.gate_fn = pauli, measure, prep, gate
        self.by_time = [[] for _ in range(circuit.n_moments)]
        for loc in circuit.locations:
            self.by_time[loc.time].append(loc)
        self.cl = {}
        for c in circuit.classical:
            self.cl.setdefault(c.time, []).append(c)
        self.faults = {}
        if faults is not None:
            for lid, p in faults.faults:
                self.faults.setdefault(lid, []).append(p)

    def _inject(self, loc):
        for p in self.faults.get(loc.id, ()):
            self.pauli(_embed(self.c.n_physical, loc.qubits, p.x, p.z))

    def run(self):
        c = self.c
        rec = np.zeros(c.n_records, np.uint8)
        rejected = False
        readouts = {}
        measured = set()
        for t, locs in enumerate(self.by_time):
            for loc in locs:
                if loc.kind == MEAS:
                    self._inject(loc)
                    q = loc.qubits[0]
                    m = PauliOperator.single(c.n_physical, q, loc.op)
                    f = self.forced.get(loc.record)
                    out = self.measure_fn(m, None if f is None else (1 - 2 * f))
                    rec[loc.record] = (1 - out) // 2
                    measured.add(q)
            for loc in locs:
                if loc.kind == PREP:
                    self.prep_fn(loc.qubits[0], loc.op)
                    measured.discard(loc.qubits[0])
                elif loc.kind in (GATE1, GATE2):
                    self.gate_fn(Gate(loc.op, loc.qubits))
            for loc in locs:
                if loc.kind != MEAS:
                    self._inject(loc)
            for cs in self.cl.get(t, ()):
                if isinstance(cs, FeedForward):
                    cx, cz = cs.decoder(rec[list(cs.inputs)][None, :])
                    self.pauli(_embed(c.n_physical, cs.targets, cx[0], cz[0]))
                elif isinstance(cs, Postselect):
                    bits = rec[list(cs.inputs)].astype(np.int64)
                    if np.any((cs.checks.astype(np.int64) @ bits) & 1):
                        rejected = True
                elif isinstance(cs, Readout):
                    readouts[cs.name] = np.asarray(cs.decoder(rec[list(cs.inputs)][None, :]))[0]
                elif isinstance(cs, ConditionalGates):
                    if int(np.asarray(readouts[cs.readout]).ravel()[0]):
                        for g in cs.gates:
                            self.gate_fn(g)
        return Execution(self.state, rec, rejected, readouts, measured)


def execute_tableau(circuit, rng=None, inputs=None, faults=None, forced=None):
    """Run a Clifford circuit on a stabilizer tableau.

    inputs: {block: (code, '0' | '+')} logical states for input blocks.
    forced: {record index: bit} to pin measurement outcomes.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    tab = Tableau(circuit.n_physical)
    for name, (code, state) in (inputs or {}).items():
        prepare_logical_tableau(tab, circuit.blocks[name], code, state, rng)

    def gate(g):
        if not g.is_clifford:
            raise UnsupportedError("tableau execution needs Clifford gates")
        tab.apply(g)

    r = _Runner(circuit, tab, rng, faults, forced, tab.pauli,
                lambda m, f: tab.measure(m, rng, f)[0],
                lambda q, s: tab.prep(q, s, rng), gate)
    return r.run()


def execute_dense(circuit, amplitudes=None, rng=None, faults=None, forced=None, limit=None):
    """Run a circuit on a state vector over all of its qubits."""
    from ..clifford import dense as dmod
    n = circuit.n_physical
    cap = dmod.dense_limit() if limit is None else limit
    if n > cap:
        raise ResourceLimitError(f"circuit has {n} qubits; dense execution limited to {cap}")
    st = DenseState.__new__(DenseState)
    st.n = n
    if amplitudes is None:
        amplitudes = np.zeros(1 << n, complex)
        amplitudes[0] = 1
    st.amplitudes = np.asarray(amplitudes, complex)
    rng = np.random.default_rng(0) if rng is None else rng
    r = _Runner(circuit, st, rng, faults, forced, st.apply_pauli,
                lambda m, f: st.measure(m, rng, f)[0],
                lambda q, s: st.prep(q, s, rng), st.apply)
    return r.run()


def block_state(amplitudes, n, keep, fixed):
    """Amplitudes on ``keep`` qubits after pinning the qubits in ``fixed`` (dict q -> bit)."""
    psi = np.asarray(amplitudes).reshape([2] * n)
    idx = tuple(fixed.get(q, slice(None)) for q in range(n))
    sub = psi[idx]
    rest = [q for q in range(n) if q not in fixed]
    order = [rest.index(q) for q in keep]
    others = [i for i in range(len(rest)) if i not in order]
    sub = np.transpose(sub, order + others)
    sub = sub.reshape(1 << len(keep), -1)
    col = np.argmax(np.linalg.norm(sub, axis=0))
    v = sub[:, col]
    return v / np.linalg.norm(v)
