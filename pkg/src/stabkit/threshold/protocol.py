"""Encoded protocols and their extended rectangles."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..clifford import Gate, Tableau
from ..errors import UnsupportedError
from ..gf2 import nullspace
from ..ft.circuit import CircuitBuilder, Readout, PREP, GATE1, GATE2, MEAS, WAIT
from ..ft.decoders import LogicalParity
from ..ft.gadgets import css_data, emit_ec, emit_verified_state, transversal_phase

DEFAULT_GADGETS = ("prep:0", "prep:+", "gate1:H", "gate1:P", "gate1:X", "gate1:Z", "gate2:CNOT",
                   "meas:Z", "meas:X", "wait:I")


@dataclass(frozen=True)
class ExRec:
    index: int                  # position in the original circuit's location list
    kind: str                   # prep | gate | meas | wait
    op: str
    lead: tuple                 # group names of leading ECs
    gadget: str                 # group name of the gadget
    trail: tuple                # group names of trailing ECs

    @property
    def groups(self):
        return self.lead + (self.gadget,) + self.trail


@dataclass
class FTProtocol:
    original: object
    encoded: object
    code: object
    exrecs: list
    exrec_index: dict = field(default_factory=dict)   # original location id -> ExRec
    checks: object = None                              # see logical_checks

    def group_locations(self):
        """Group name -> array of encoded location ids (sub-groups included)."""
        out = {}
        for loc in self.encoded.locations:
            top = loc.group.split("/")[0]
            out.setdefault(top, []).append(loc.id)
        return {k: np.array(v, np.int64) for k, v in out.items()}


def _kind(loc):
    return {PREP: "prep", GATE1: "gate", GATE2: "gate", MEAS: "meas", WAIT: "wait"}[loc.kind]


def build_protocol(original, code, ec="steane", gadgets=DEFAULT_GADGETS):
    """Replace every location by its gadget and put an EC between consecutive locations."""
    cd = css_data(code)
    phase = None
    b = CircuitBuilder()
    block, ready = {}, {}
    last_ec = {}
    locs = sorted(original.locations, key=lambda l: (l.time, l.id))
    remaining = {}
    for loc in locs:
        for q in loc.qubits:
            remaining[q] = remaining.get(q, 0) + 1
    exrecs = []
    n_ec = 0
    for i, loc in enumerate(locs):
        key = f"{loc.kind}:{loc.op}"
        if key not in gadgets:
            raise UnsupportedError(f"no gadget registered for {key}")
        g = f"g{loc.id}"
        lead = tuple(last_ec.pop(q) for q in loc.qubits if q in last_ec)
        if loc.kind == PREP:
            q = loc.qubits[0]
            t = ready.get(q, 0)
            block[q] = emit_verified_state(b, cd, loc.op, g, t)
            t_next = t
        else:
            t = max(ready[q] for q in loc.qubits)
            if loc.kind == GATE2:
                a, c = (block[q] for q in loc.qubits)
                for j in range(code.n):
                    b.gate(t, loc.op, (a[j], c[j]), g)
            elif loc.kind == GATE1:
                qs = block[loc.qubits[0]]
                if loc.op in ("X", "Z"):
                    mask = cd.lx if loc.op == "X" else cd.lz
                    for j in np.nonzero(mask)[0]:
                        b.gate(t, loc.op, (qs[j],), g)
                    for j in np.nonzero(1 - mask)[0]:
                        b.add(t, WAIT, "I", (qs[j],), g)
                else:
                    if loc.op == "P":
                        phase = phase or transversal_phase(code)
                    for j in range(code.n):
                        b.gate(t, phase if loc.op == "P" else loc.op, (qs[j],), g)
            elif loc.kind == WAIT:
                for x in block[loc.qubits[0]]:
                    b.add(t, WAIT, "I", (x,), g)
            elif loc.kind == MEAS:
                qs = block[loc.qubits[0]]
                recs = tuple(b.measure(t, x, loc.op, g) for x in qs)
                dec = LogicalParity(cd.hz, cd.lz) if loc.op == "Z" else LogicalParity(cd.hx, cd.lx)
                b.add_classical(Readout(t, f"m{loc.id}", dec, recs))
            t_next = t + 1
        trail = []
        for q in loc.qubits:
            remaining[q] -= 1
            if loc.kind == MEAS:
                continue
            ready[q] = t_next
            if remaining[q] > 0:
                name = f"ec{n_ec}"
                n_ec += 1
                block[q], ready[q] = emit_ec(ec, b, code, block[q], t_next, name)
                last_ec[q] = name
                trail.append(name)
        exrecs.append(ExRec(i, _kind(loc), loc.op, lead, g, tuple(trail)))
    measured = {l.qubits[0] for l in locs if l.kind == MEAS}
    outs = [b.block_name(qs) for q, qs in block.items() if q not in measured]
    enc = b.finalize(tuple(outs), {"kind": "protocol", "code": code, "ec": ec})
    index = {loc.id: e for loc, e in zip(locs, exrecs)}
    proto = FTProtocol(original, enc, code, exrecs, index)
    proto.checks = logical_checks(original, [f"m{l.id}" for l in locs if l.kind == MEAS],
                                  [q for q in block if q not in measured])
    return proto


def logical_checks(original, readouts, outputs):
    """Logical Paulis that would reveal a frame error in the ideal protocol.

    Measurements are deferred onto fresh ancillas (CNOT copy), measured
    wires are discarded.  A logical frame (X flips on readouts, X/Z on the
    outputs) leaves the output distribution unchanged iff it commutes with
    every stabilizer of the final state that is trivial on discarded wires
    and Z-type on ancillas.  Returns (readouts, bx, bz) with columns
    readouts + outputs; bx is zero on readout columns.
    """
    locs = sorted(original.locations, key=lambda l: (l.time, l.id))
    n = sum(l.kind in (PREP, MEAS) for l in locs)
    tab = Tableau(n)
    wire, anc = {}, {}
    nxt = 0
    for loc in locs:
        if loc.kind == PREP:
            wire[loc.qubits[0]] = nxt
            if loc.op == "+":
                tab.apply(Gate("H", (nxt,)))
            nxt += 1
        elif loc.kind == MEAS:
            w = wire.pop(loc.qubits[0])
            if loc.op == "X":
                tab.apply(Gate("H", (w,)))
            tab.apply(Gate("CNOT", (w, nxt)))
            anc[f"m{loc.id}"] = nxt
            nxt += 1
        elif loc.kind in (GATE1, GATE2):
            tab.apply(Gate(loc.op, tuple(wire[q] for q in loc.qubits)))
    rows = tab.stabilizers()
    gx = np.array([r.x for r in rows], np.uint8).reshape(-1, n)
    gz = np.array([r.z for r in rows], np.uint8).reshape(-1, n)
    keep_r = [anc[r] for r in readouts]
    keep_o = [wire[q] for q in outputs]
    gone = sorted(set(range(n)) - set(keep_r) - set(keep_o))
    cons = np.hstack([gx[:, gone], gz[:, gone], gx[:, keep_r]])
    coef = nullspace(cons.T, len(rows)) if cons.shape[1] else np.eye(len(rows), dtype=np.uint8)
    bx = coef.astype(np.int64) @ gx % 2
    bz = coef.astype(np.int64) @ gz % 2
    cols = keep_r + keep_o
    return tuple(readouts), bx[:, cols].astype(np.uint8), bz[:, cols].astype(np.uint8)


def sample_protocol_circuit():
    """Two preparations, a CNOT, H on the first qubit, then both measured."""
    b = CircuitBuilder()
    b.block("q", 2, is_input=False)
    b.prep(0, 0, "0", "c")
    b.prep(0, 1, "0", "c")
    b.gate(1, "CNOT", (0, 1), "c")
    b.gate(2, "H", (0,), "c")
    b.measure(2, 1, "Z", "c")
    b.measure(3, 0, "Z", "c")
    return b.finalize((), {"kind": "original"})


def classify_exrecs(protocol, faults, t=1):
    """Good/bad and full/truncated status of every ExRec, decided back to front.

    ``faults`` is a FaultPattern or an iterable of faulty encoded location ids.
    Returns {ExRec index: (good, truncated)}.
    """
    ids = {lid for lid, _ in faults.faults} if hasattr(faults, "faults") else set(int(f) for f in faults)
    counts = {}
    for loc in protocol.encoded.locations:
        if loc.id in ids:
            top = loc.group.split("/")[0]
            counts[top] = counts.get(top, 0) + 1
    bad_lead = set()      # EC groups serving as leading EC of a bad ExRec
    status = {}
    for e in sorted(protocol.exrecs, key=lambda e: -e.index):
        kept = tuple(g for g in e.trail if g not in bad_lead)
        truncated = len(kept) < len(e.trail)
        n = sum(counts.get(g, 0) for g in e.lead + (e.gadget,) + kept)
        good = n <= t
        status[e.index] = (good, truncated)
        if not good:
            bad_lead.update(e.lead)
    return status
