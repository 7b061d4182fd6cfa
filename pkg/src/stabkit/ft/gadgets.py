"""Fault-tolerant gadget circuits.

Gadgets are emitted into a CircuitBuilder at an absolute moment.  Ancilla
factories (encoders plus verification) are scheduled as late as possible,
ending right before the moment their output is consumed, so their moments
may be negative and run in parallel with earlier work on the data.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import gf2
from ..clifford.dense import DenseState
from ..clifford.instructions import Gate
from ..codes.dense import codeword_basis, dense_limit
from ..codes.stabilizer import StabilizerCode
from ..errors import UnsupportedError, DimensionError
from .circuit import WAIT, CircuitBuilder, FeedForward, Postselect, Readout, Checkpoint, ConditionalGates
from .decoders import TableCorrection, LogicalParity, TeleportCorrection, MajorityCorrection

CONTROLLED = {"X": "CNOT", "Z": "CZ", "Y": "CY"}


@dataclass(frozen=True)
class CSSData:
    n: int
    hx: np.ndarray     # X-type generator supports
    hz: np.ndarray     # Z-type generator supports
    lx: np.ndarray     # support of the X-type logical X
    lz: np.ndarray     # support of the Z-type logical Z


def css_data(code):
    if not code.is_css:
        raise UnsupportedError(f"{code.name or 'code'} is not a CSS code")
    if code.k != 1:
        raise UnsupportedError("gadgets are built for codes with one logical qubit")
    lx, lz = code.logical_x[0], code.logical_z[0]
    if lx.z.any() or lz.x.any():
        raise UnsupportedError("CSS gadgets need an X-type logical X and a Z-type logical Z")
    hx, hz = code.css_checks()
    return CSSData(code.n, hx, hz, lx.x.astype(np.uint8), lz.z.astype(np.uint8))


# ---------------------------------------------------------------- building blocks

def _layers(pairs):
    """Greedy packing of commuting two-qubit gates into moments."""
    layers = []
    for c, t in pairs:
        for used, ops in layers:
            if c not in used and t not in used:
                used.update((c, t))
                ops.append((c, t))
                break
        else:
            layers.append(({c, t}, [(c, t)]))
    return [ops for _, ops in layers]


def encoder_plan(rows, n):
    """Pivot qubits and CNOT layers preparing sum over the row space of ``rows``.

    Pivots start in |+>, everything else in |0>; every CNOT goes from a pivot
    to another qubit in its reduced row, so all of them commute.
    """
    red, piv, _ = gf2.rref(rows)
    pairs = [(p, int(j)) for i, p in enumerate(piv) for j in np.nonzero(red[i])[0] if j != p]
    return list(piv), _layers(pairs)


def emit_encoder(b, qubits, rows, t_ready, group):
    """Encode ``rows``' span on ``qubits`` so the state is ready at moment ``t_ready``."""
    n = len(qubits)
    piv, layers = encoder_plan(rows, n)
    t0 = t_ready - len(layers)
    first = {}
    for k, ops in enumerate(layers):
        for c, t in ops:
            first.setdefault(c, t0 + k)
            first.setdefault(t, t0 + k)
            b.gate(t0 + k, "CNOT", (qubits[c], qubits[t]), group)
    for j in range(n):
        b.prep(first.get(j, t_ready) - 1, qubits[j], "+" if j in piv else "0", group)


def emit_verified_state(b, cd, state, name, t_use, group=None):
    """Verified |0> or |+> logical ancilla on a new block ``name``, ready at ``t_use``.

    A checker block prepared the same way is coupled transversally and
    measured; the run is rejected unless the measured word passes every
    check of the state's stabilizer in that basis.
    """
    group = group or name
    n = cd.n
    out = b.block(name, n)
    chk = b.block(name + ".chk", n)
    if state == "0":
        rows = cd.hx
        checks = np.vstack([cd.hz, cd.lz])
    elif state == "+":
        rows = np.vstack([cd.hx, cd.lx])
        checks = np.vstack([cd.hx, cd.lx])
    else:
        raise ValueError(f"unknown logical state {state!r}")
    t = t_use - 2
    emit_encoder(b, out, rows, t, group + "/enc")
    emit_encoder(b, chk, rows, t, group + "/chk")
    recs = []
    for i in range(n):
        if state == "0":
            b.gate(t, "CNOT", (out[i], chk[i]), group)
            recs.append(b.measure(t + 1, chk[i], "Z", group))
        else:
            b.gate(t, "CNOT", (chk[i], out[i]), group)
            recs.append(b.measure(t + 1, chk[i], "X", group))
    b.add_classical(Postselect(t + 1, tuple(recs), checks.astype(np.uint8), group))
    b.add_classical(Checkpoint(t_use - 1, group, out))
    return out


def emit_cat(b, m, name, t_use, group=None):
    """Cat state |0..0> + |1..1> on ``m`` new qubits, ready at ``t_use``.

    Fan-out from the first qubit; for m >= 3 the parity of the second and
    last qubits is checked on an extra qubit and the run is rejected when
    it is odd.
    """
    if m < 1:
        raise DimensionError("cat state needs at least one qubit")
    group = group or name
    cat = b.block(name, m)
    verify = m >= 3
    ts = t_use - m - (2 if verify else 0)
    b.prep(ts, cat[0], "+", group)
    for j in range(1, m):
        b.prep(ts + j - 1, cat[j], "0", group)
        b.gate(ts + j, "CNOT", (cat[0], cat[j]), group)
    if verify:
        v = b.block(name + ".v", 1)[0]
        b.prep(ts + 1, v, "0", group)
        b.gate(ts + 2, "CNOT", (cat[1], v), group)
        b.gate(ts + m, "CNOT", (cat[m - 1], v), group)
        r = b.measure(ts + m + 1, v, "Z", group)
        b.add_classical(Postselect(ts + m + 1, (r,), np.ones((1, 1), np.uint8), group))
    return cat


# ---------------------------------------------------------------- error correction

def emit_steane_ec(b, code, data, t0, group):
    """Steane EC on ``data`` starting at ``t0``; returns (block qubits, next free moment)."""
    cd = css_data(code)
    n = cd.n
    anc0 = emit_verified_state(b, cd, "0", group + "/anc0", t0)
    ancp = emit_verified_state(b, cd, "+", group + "/anc+", t0 + 1)
    r0, rp = [], []
    for i in range(n):
        b.gate(t0, "CNOT", (anc0[i], data[i]), group)
    for i in range(n):
        b.gate(t0 + 1, "CNOT", (data[i], ancp[i]), group)
        r0.append(b.measure(t0 + 1, anc0[i], "X", group))
    for i in range(n):
        rp.append(b.measure(t0 + 2, ancp[i], "Z", group))
    b.add_classical(FeedForward(t0 + 2, TableCorrection.classical(cd.hx, "Z"), tuple(r0), tuple(data), group))
    b.add_classical(FeedForward(t0 + 2, TableCorrection.classical(cd.hz, "X"), tuple(rp), tuple(data), group))
    return tuple(data), t0 + 3


def emit_knill_ec(b, code, data, t0, group):
    """Knill EC: teleport ``data`` through a verified logical Bell pair into a new block."""
    cd = css_data(code)
    n = cd.n
    mid = emit_verified_state(b, cd, "+", group + "/mid", t0 - 1)
    out = emit_verified_state(b, cd, "0", group + "/out", t0 - 1)
    for i in range(n):
        b.gate(t0 - 1, "CNOT", (mid[i], out[i]), group)
    for i in range(n):
        b.gate(t0, "CNOT", (data[i], mid[i]), group)
    ra = [b.measure(t0 + 1, data[i], "X", group) for i in range(n)]
    rb = [b.measure(t0 + 1, mid[i], "Z", group) for i in range(n)]
    b.add_classical(FeedForward(t0 + 1, TeleportCorrection(code, n), tuple(ra + rb), tuple(out), group))
    return tuple(out), t0 + 2


def destabilizers(code):
    """Rows (dx, dz) with row i anticommuting with generator i only."""
    a = code.a
    dx = np.zeros((a, code.n), np.uint8)
    dz = np.zeros((a, code.n), np.uint8)
    for i in range(a):
        e = code.error_for_syndrome(np.eye(a, dtype=np.uint8)[i])
        dx[i], dz[i] = e.x, e.z
    return dx, dz


def emit_shor_ec(b, code, data, t0, group, repetitions=3, linear=False):
    """Shor EC: every generator measured with a verified cat state, ``repetitions`` rounds.

    With ``linear`` the consensus syndrome is undone by destabilizers
    instead of a minimum-weight correction (used to project onto a state).
    """
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    t = t0
    rounds, recs = [], []
    for r in range(repetitions):
        rnd = []
        for i, g in enumerate(code.generators):
            if not g.is_hermitian or g.sign_bit:
                raise UnsupportedError("cat-state measurement expects +1 signed generators")
            supp = g.support
            cat = emit_cat(b, len(supp), f"{group}/r{r}g{i}", t)
            for c, q in zip(cat, supp):
                letter = g.letters()[q]
                b.gate(t, CONTROLLED[letter], (c, data[q]), group)
            rec = [b.measure(t + 1, c, "X", group) for c in cat]
            rnd.append(rec)
            recs.extend(rec)
            t += 1
        rounds.append(rnd)
    tx, tz = code.decoding_table()
    dec = MajorityCorrection(rounds, tx, tz, destabilizers(code) if linear else None)
    b.add_classical(FeedForward(t, dec, tuple(recs), tuple(data), group))
    b.add_classical(Readout(t, group + "/syndrome", dec.consensus, tuple(recs)))
    return tuple(data), t + 1


EC_KINDS = {"steane": emit_steane_ec, "knill": emit_knill_ec, "shor": emit_shor_ec}


def emit_ec(kind, b, code, data, t0, group, **kw):
    try:
        fn = EC_KINDS[kind]
    except KeyError:
        raise UnsupportedError(f"unknown EC kind {kind!r}") from None
    return fn(b, code, data, t0, group, **kw)


def _ec_circuit(kind, code, **kw):
    b = CircuitBuilder()
    data = b.block("in", code.n, is_input=True)
    out, _ = emit_ec(kind, b, code, data, 0, "ec", **kw)
    name = b.block_name(out)
    return b.finalize((name,), {"kind": "ec", "code": code, "in": ("in",), "out": (name,), "ec": kind})


def steane_ec(code):
    return _ec_circuit("steane", code)


def knill_ec(code):
    return _ec_circuit("knill", code)


def shor_ec(code, repetitions=None, t=1):
    reps = 2 * t + 1 if repetitions is None else repetitions
    return _ec_circuit("shor", code, repetitions=reps)


# ---------------------------------------------------------------- state preparation

def extended_code(code, state):
    """Stabilizer code of the logical state: generators plus logical Z (or X)."""
    extra = code.logical_z[0] if state == "0" else code.logical_x[0]
    return StabilizerCode(list(code.generators) + [extra], name=f"{code.name}|{state}>")


def prep_logical(code, state="0", strategy="verify_discard", t=1):
    b = CircuitBuilder()
    if strategy == "verify_discard":
        emit_verified_state(b, css_data(code), state, "out", 0)
    elif strategy == "shor_project":
        if state not in ("0", "+"):
            raise ValueError(f"unknown logical state {state!r}")
        out = b.block("out", code.n)
        for q in out:
            b.prep(0, q, state, "prep")
        emit_shor_ec(b, extended_code(code, state), out, 1, "ec", repetitions=2 * t + 1, linear=True)
    else:
        raise ValueError(f"unknown preparation strategy {strategy!r}")
    return b.finalize(("out",), {"kind": "prep", "code": code, "state": state, "in": (), "out": ("out",),
                                 "strategy": strategy})


def cat_state_circuit(m):
    b = CircuitBuilder()
    emit_cat(b, m, "cat", 0)
    return b.finalize(("cat",), {"kind": "cat", "m": m, "in": (), "out": ("cat",)})


# ---------------------------------------------------------------- transversal gates

def _logical_matrix(code, kind):
    basis = codeword_basis(code)
    cols = []
    for v in basis:
        st = DenseState(code.n, v.copy())
        for q in range(code.n):
            st.apply(Gate(kind, (q,)))
        cols.append(st.amplitudes)
    return np.array([[np.vdot(u, c) for c in cols] for u in basis])


def _matches(m, target, tol=1e-9):
    ov = np.trace(target.conj().T @ m) / target.shape[0]
    return abs(abs(ov) - 1) < tol and np.allclose(m, ov * target, atol=tol)


def transversal_phase(code):
    """Physical gate whose n-fold tensor power is the logical phase gate ('P' or 'PDG')."""
    if code.n > dense_limit():
        raise UnsupportedError("transversal phase gate is verified densely; code too long")
    target = np.diag([1, 1j])
    for kind in ("P", "PDG"):
        if _matches(_logical_matrix(code, kind), target):
            return kind
    raise UnsupportedError(f"{code.name or 'code'} has no transversal phase gate")


def _check_transversal_h(code):
    if code.n > dense_limit():
        raise UnsupportedError("transversal Hadamard is verified densely; code too long")
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    if not _matches(_logical_matrix(code, "H"), h):
        raise UnsupportedError(f"{code.name or 'code'} has no transversal Hadamard")


def transversal_gate(code, logical):
    """One-moment transversal circuit for X, Z, H, P or CNOT on the logical qubit(s)."""
    logical = logical.upper().rstrip("̄")
    b = CircuitBuilder()
    meta = {"kind": "gate", "code": code, "logical": logical}
    if logical == "CNOT":
        if not code.is_css:
            raise UnsupportedError("transversal CNOT needs a CSS code")
        a = b.block("a", code.n, is_input=True)
        c = b.block("b", code.n, is_input=True)
        for i in range(code.n):
            b.gate(0, "CNOT", (a[i], c[i]), "gate")
        return b.finalize(("a", "b"), {**meta, "in": ("a", "b"), "out": ("a", "b"), "physical": "CNOT"})
    q = b.block("in", code.n, is_input=True)
    if logical in ("X", "Z"):
        if code.k != 1:
            raise UnsupportedError("logical Paulis are built for one logical qubit")
        p = (code.logical_x if logical == "X" else code.logical_z)[0]
        letters = p.letters()
        if not p.support:
            raise UnsupportedError("logical operator has empty support")
        for j in range(code.n):
            if letters[j] == "I":
                b.add(0, WAIT, "I", (q[j],), "gate")
            else:
                b.gate(0, letters[j], (q[j],), "gate")
        phys = letters
    elif logical == "H":
        _check_transversal_h(code)
        phys = "H"
    elif logical == "P":
        phys = transversal_phase(code)
    else:
        raise UnsupportedError(f"no transversal construction for logical {logical}")
    if logical in ("H", "P"):
        for j in range(code.n):
            b.gate(0, phys, (q[j],), "gate")
    return b.finalize(("in",), {**meta, "in": ("in",), "out": ("in",), "physical": phys})


def measurement_gadget(code, basis="Z"):
    """Transversal single-qubit measurement read out as the logical value."""
    cd = css_data(code)
    b = CircuitBuilder()
    q = b.block("in", code.n, is_input=True)
    recs = tuple(b.measure(0, x, basis, "meas") for x in q)
    dec = LogicalParity(cd.hz, cd.lz) if basis == "Z" else LogicalParity(cd.hx, cd.lx)
    b.add_classical(Readout(0, "m", dec, recs))
    return b.finalize((), {"kind": "meas", "code": code, "basis": basis, "in": ("in",), "out": ()})


def knill_measurement(code):
    """Logical Z measurement by teleporting into a verified |0> block and reading it."""
    cd = css_data(code)
    b = CircuitBuilder()
    q = b.block("in", code.n, is_input=True)
    anc = emit_verified_state(b, cd, "0", "anc", 0)
    for i in range(code.n):
        b.gate(0, "CNOT", (q[i], anc[i]), "meas")
    for i in range(code.n):
        b.measure(1, q[i], "X", "meas")
    recs = tuple(b.measure(1, a, "Z", "meas") for a in anc)
    b.add_classical(Readout(1, "m", LogicalParity(cd.hz, cd.lz), recs))
    return b.finalize((), {"kind": "meas", "code": code, "basis": "Z", "in": ("in",), "out": ()})


def gate_teleport_pi8(code):
    """pi/8 rotation by teleportation from a supplied |0> + e^{i pi/4}|1> block."""
    cd = css_data(code)
    phase = transversal_phase(code)
    inverse = "P" if phase == "PDG" else "PDG"
    b = CircuitBuilder()
    q = b.block("in", code.n, is_input=True)
    m = b.block("magic", code.n, is_input=True)
    for i in range(code.n):
        b.gate(0, "CNOT", (m[i], q[i]), "tele")
    recs = tuple(b.measure(1, x, "Z", "tele") for x in q)
    b.add_classical(Readout(1, "m", LogicalParity(cd.hz, cd.lz), recs))
    fix = tuple(Gate(inverse, (x,)) for x in m) + tuple(Gate("X", (m[j],)) for j in np.nonzero(cd.lx)[0])
    b.add_classical(ConditionalGates(1, "m", fix, "tele"))
    return b.finalize(("magic",), {"kind": "teleport", "code": code, "in": ("in", "magic"), "out": ("magic",)})


# ---------------------------------------------------------------- extended rectangles

def cnot_exrec(code, ec="steane", **kw):
    """Leading EC on both blocks, transversal CNOT, trailing EC on both blocks."""
    b = CircuitBuilder()
    a = b.block("a", code.n, is_input=True)
    c = b.block("b", code.n, is_input=True)
    a, ta = emit_ec(ec, b, code, a, 0, "lead0", **kw)
    c, tb = emit_ec(ec, b, code, c, 0, "lead1", **kw)
    t = max(ta, tb)
    b.add_classical(Checkpoint(t - 1, "lead", tuple(a) + tuple(c)))
    for i in range(code.n):
        b.gate(t, "CNOT", (a[i], c[i]), "gadget")
    a, ta = emit_ec(ec, b, code, a, t + 1, "trail0", **kw)
    c, tb = emit_ec(ec, b, code, c, t + 1, "trail1", **kw)
    outs = (b.block_name(a), b.block_name(c))
    return b.finalize(outs, {"kind": "exrec", "code": code, "logical": "CNOT", "ec": ec,
                             "in": ("a", "b"), "out": outs,
                             "parts": {"lead": ("lead0", "lead1"), "gadget": ("gadget",),
                                       "trail": ("trail0", "trail1")}})


GADGETS = ("steane-ec", "knill-ec", "shor-ec", "prep-0", "prep-plus", "prep-shor-0", "prep-shor-plus",
           "cnot", "h", "p", "x", "z", "meas-z", "meas-x", "meas-knill", "pi8", "cnot-exrec", "cat-<m>")


def build_gadget(code, name, ec="steane", t=1):
    """Gadget circuit by command-line name (see GADGETS)."""
    name = name.lower()
    if name.startswith("cat-"):
        return cat_state_circuit(int(name[4:]))
    simple = {
        "steane-ec": lambda: steane_ec(code),
        "knill-ec": lambda: knill_ec(code),
        "shor-ec": lambda: shor_ec(code, t=t),
        "prep-0": lambda: prep_logical(code, "0", t=t),
        "prep-plus": lambda: prep_logical(code, "+", t=t),
        "prep-shor-0": lambda: prep_logical(code, "0", "shor_project", t=t),
        "prep-shor-plus": lambda: prep_logical(code, "+", "shor_project", t=t),
        "meas-z": lambda: measurement_gadget(code, "Z"),
        "meas-x": lambda: measurement_gadget(code, "X"),
        "meas-knill": lambda: knill_measurement(code),
        "pi8": lambda: gate_teleport_pi8(code),
        "cnot-exrec": lambda: cnot_exrec(code, ec),
    }
    if name in simple:
        return simple[name]()
    if name in ("cnot", "h", "p", "x", "z"):
        return transversal_gate(code, name.upper())
    raise UnsupportedError(f"unknown gadget {name!r}; known: {', '.join(GADGETS)}")
