"""Timed fault-location circuits for gadgets and protocols.

A circuit is a sequence of moments.  Every location (prep, one- or
two-qubit gate, measurement, wait) sits in one moment, and each live qubit
appears in exactly one location per moment.  Classical steps (feed-forward
corrections, postselection, logical readouts, frame checkpoints) run
between moments and are not fault locations: corrections are tracked in
software.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DimensionError
from ..pauli import PauliOperator

PREP, GATE1, GATE2, MEAS, WAIT = "prep", "gate1", "gate2", "meas", "wait"
TWO_QUBIT_GATES = ("CNOT", "CZ", "CY")


@dataclass(frozen=True)
class Location:
    id: int
    kind: str
    op: str            # prep: '0'|'+'; gate: gate name; meas: 'Z'|'X'; wait: 'I'
    qubits: tuple
    time: int
    group: str
    record: int = -1   # measurement record index

    @property
    def n_paulis(self):
        return 15 if len(self.qubits) == 2 else 3


@dataclass(frozen=True)
class FeedForward:
    """Apply decoder(record bits) as a Pauli correction on target qubits."""
    time: int
    decoder: object
    inputs: tuple
    targets: tuple
    group: str = ""


@dataclass(frozen=True)
class ConditionalGates:
    """Apply Clifford or non-Clifford gates when a readout bit is 1 (dense/tableau only)."""
    time: int
    readout: str
    gates: tuple
    group: str = ""


@dataclass(frozen=True)
class Postselect:
    """Reject the run unless every check parity over the record bits is zero."""
    time: int
    inputs: tuple
    checks: np.ndarray
    factory: str


@dataclass(frozen=True)
class Readout:
    """Logical measurement result computed from record bits."""
    time: int
    name: str
    decoder: object
    inputs: tuple


@dataclass(frozen=True)
class Checkpoint:
    """Snapshot of the frame on some qubits (used for ExRec and factory analysis)."""
    time: int
    name: str
    qubits: tuple


CLASSICAL = (FeedForward, ConditionalGates, Postselect, Readout, Checkpoint)


@dataclass
class Circuit:
    n_physical: int
    locations: list
    classical: list
    blocks: dict                      # block name -> tuple of qubits
    inputs: tuple = ()                # input block names (live at time 0)
    outputs: tuple = ()               # output block names
    n_records: int = 0
    n_moments: int = 0
    meta: dict = field(default_factory=dict)

    @property
    def block_map(self):
        out = {}
        for name, qs in self.blocks.items():
            for pos, q in enumerate(qs):
                out[q] = (name, pos)
        return out

    def locations_in(self, prefix):
        return [loc for loc in self.locations if loc.group == prefix or loc.group.startswith(prefix + "/")]

    def is_clifford(self):
        return all(loc.op not in ("T", "TDG") for loc in self.locations) and not any(
            isinstance(c, ConditionalGates) for c in self.classical)

    def summary(self):
        kinds = {}
        for loc in self.locations:
            kinds[loc.kind] = kinds.get(loc.kind, 0) + 1
        return {"qubits": self.n_physical, "moments": self.n_moments,
                "locations": len(self.locations), **kinds}


class CircuitBuilder:
    """Incremental construction with absolute (possibly negative) moment indices."""

    def __init__(self):
        self.n = 0
        self._ops = []          # (time, kind, op, qubits, group, record)
        self.classical = []
        self.blocks = {}
        self.inputs = []
        self.n_records = 0
        self._busy = set()      # (time, qubit)

    def block(self, name, size, is_input=False):
        if name in self.blocks:
            raise ValueError(f"duplicate block {name}")
        qs = tuple(range(self.n, self.n + size))
        self.n += size
        self.blocks[name] = qs
        if is_input:
            self.inputs.append(name)
        return qs

    def block_name(self, qubits):
        qubits = tuple(qubits)
        for name, qs in self.blocks.items():
            if qs == qubits:
                return name
        raise KeyError("qubits do not form a block")

    def add(self, time, kind, op, qubits, group):
        qubits = tuple(int(q) for q in qubits)
        for q in qubits:
            if (time, q) in self._busy:
                raise ValueError(f"qubit {q} used twice in moment {time}")
            self._busy.add((time, q))
        rec = -1
        if kind == MEAS:
            rec = self.n_records
            self.n_records += 1
        self._ops.append((time, kind, op, qubits, group, rec))
        return rec

    def prep(self, t, q, state, group):
        return self.add(t, PREP, state, (q,), group)

    def gate(self, t, name, qubits, group):
        return self.add(t, GATE2 if len(qubits) == 2 else GATE1, name, qubits, group)

    def measure(self, t, q, basis, group):
        return self.add(t, MEAS, basis, (q,), group)

    def add_classical(self, c):
        self.classical.append(c)

    def finalize(self, outputs, meta=None):
        """Shift moments to start at 0, insert waits, freeze into a Circuit."""
        times = [op[0] for op in self._ops] + [c.time for c in self.classical]
        lo = min(min(times), 0) if times else 0
        hi = max(times) if times else -1
        shift = -lo
        per_qubit = {}
        for op in self._ops:
            for q in op[3]:
                per_qubit.setdefault(q, []).append(op)
        input_qubits = {q for b in self.inputs for q in self.blocks[b]}
        ops = list(self._ops)
        for q in range(self.n):
            seq = sorted(per_qubit.get(q, []), key=lambda o: o[0])
            if not seq:
                continue
            start = 0 if q in input_qubits else seq[0][0]
            stop = seq[-1][0] if seq[-1][1] == MEAS else hi
            used = {o[0] for o in seq}
            for t in range(start, stop + 1):
                if t in used:
                    continue
                prev = [o for o in seq if o[0] < t]
                group = prev[-1][4] if prev else next(o for o in seq if o[0] > t)[4]
                ops.append((t, WAIT, "I", (q,), group, -1))
        end = hi + shift + 1
        ops.sort(key=lambda o: (o[0], o[3]))
        locs = [Location(i, kind, op, qs, t + shift, group, rec)
                for i, (t, kind, op, qs, group, rec) in enumerate(ops)]
        classical = []
        for c in self.classical:
            classical.append(_shift(c, shift))
        classical.sort(key=lambda c: c.time)
        return Circuit(self.n, locs, classical, dict(self.blocks), tuple(self.inputs),
                       tuple(outputs), self.n_records, end, dict(meta or {}))


def _shift(c, shift):
    from dataclasses import replace
    return replace(c, time=c.time + shift)


# ---------------------------------------------------------------- faults

def pauli_code_of(p: PauliOperator):
    """Integer code of a 1- or 2-qubit Pauli: per qubit x + 2 z, qubit 0 in the low bits."""
    code = 0
    for i in range(p.n):
        code |= (int(p.x[i]) + 2 * int(p.z[i])) << (2 * i)
    return code


def pauli_of_code(code, nq):
    x = [(code >> (2 * i)) & 1 for i in range(nq)]
    z = [(code >> (2 * i + 1)) & 1 for i in range(nq)]
    return PauliOperator(x, z)


@dataclass(frozen=True)
class FaultPattern:
    """Faults as (location id, Pauli on that location's qubits) pairs."""
    faults: tuple = ()

    @classmethod
    def of(cls, circuit, pairs):
        out = []
        for lid, p in pairs:
            if isinstance(p, str):
                p = PauliOperator.from_string(p)
            loc = circuit.locations[lid]
            if p.n != len(loc.qubits):
                raise DimensionError(f"fault on location {lid} must act on {len(loc.qubits)} qubit(s)")
            out.append((lid, p.without_phase()))
        return cls(tuple(out))

    def to_json(self):
        return [[lid, p.letters()] for lid, p in self.faults]

    @classmethod
    def from_json(cls, data):
        return cls(tuple((int(l), PauliOperator.from_string(s)) for l, s in data))

    def __len__(self):
        return len(self.faults)


def circuit_text(circuit):
    """Render in the line-oriented circuit format, one TICK per moment.

    Classical steps are kept as comments so the file stays parseable.
    """
    n = circuit.n_physical
    by_time = {}
    for loc in circuit.locations:
        by_time.setdefault(loc.time, []).append(loc)
    cl = {}
    for c in circuit.classical:
        cl.setdefault(c.time, []).append(c)
    lines = [f"QUBITS {n}"]
    for name, qs in circuit.blocks.items():
        lines.append(f"# block {name} " + " ".join(map(str, qs)))
    for t in range(circuit.n_moments):
        if t:
            lines.append("TICK")
        for loc in by_time.get(t, ()):
            q = loc.qubits
            if loc.kind == PREP:
                lines.append(f"PREP {q[0]} {loc.op}")
            elif loc.kind == MEAS:
                s = ["I"] * n
                s[q[0]] = loc.op
                lines.append("MEAS " + "".join(s))
            elif loc.kind == WAIT:
                lines.append(f"WAIT {q[0]}")
            else:
                lines.append(" ".join([loc.op] + [str(x) for x in q]))
        for c in cl.get(t, ()):
            lines.append(f"# {type(c).__name__.lower()} " + _describe(c))
    return "\n".join(lines) + "\n"


def _describe(c):
    if isinstance(c, FeedForward):
        return f"{c.group} records {list(c.inputs)} -> qubits {list(c.targets)}"
    if isinstance(c, Postselect):
        return f"{c.factory} records {list(c.inputs)}"
    if isinstance(c, Readout):
        return f"{c.name} records {list(c.inputs)}"
    if isinstance(c, Checkpoint):
        return f"{c.name} qubits {list(c.qubits)}"
    return f"{c.readout} -> {len(c.gates)} gates"
