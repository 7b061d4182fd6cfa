import itertools
from dataclasses import replace

import numpy as np
import pytest

from stabkit.codes import get_code, codeword_basis
from stabkit.clifford import DenseState, rotation_z, fidelity
from stabkit.clifford.instructions import Gate
from stabkit.errors import UnsupportedError, ResourceLimitError
from stabkit.ft import (FaultPattern, FrameEngine, propagate, steane_ec, knill_ec, shor_ec, prep_logical,
                        cat_state_circuit, transversal_gate, transversal_phase, measurement_gadget,
                        knill_measurement, gate_teleport_pi8, cnot_exrec, build_gadget, circuit_text,
                        check_property, replay_counterexample, steane_support_check,
                        execute_tableau, execute_dense, GADGETS)
from stabkit.ft.circuit import PREP, MEAS, FeedForward, pauli_code_of, pauli_of_code
from stabkit.ft.execute import block_state
from stabkit.ft.properties import GadgetCheckReport, iter_patterns, count_patterns
from stabkit.io import emit_report, parse_report
from stabkit.pauli import PauliOperator, apply_to_state
from helpers import replay

SEVEN = get_code("seven_qubit")
FIVE = get_code("five_qubit")
NINE = get_code("nine_qubit")


def Pa(s):
    return PauliOperator.from_string(s)


def single(n, q, k):
    return PauliOperator.single(n, q, k)


# ---------------------------------------------------------------- circuit structure

ALL = [steane_ec(SEVEN), knill_ec(SEVEN), shor_ec(FIVE), shor_ec(SEVEN), prep_logical(SEVEN, "0"),
       prep_logical(SEVEN, "+"), prep_logical(SEVEN, "0", "shor_project"), cat_state_circuit(5),
       transversal_gate(SEVEN, "CNOT"), transversal_gate(SEVEN, "H"), measurement_gadget(SEVEN),
       knill_measurement(SEVEN), cnot_exrec(SEVEN)]


@pytest.mark.parametrize("c", ALL, ids=lambda c: f"{c.meta['kind']}-{len(c.locations)}")
def test_locations_well_formed(c):
    inputs = {q for b in c.inputs for q in c.blocks[b]}
    per_q = {}
    starts = set()
    for loc in c.locations:
        for q in loc.qubits:
            per_q.setdefault(q, []).append(loc)
    for q, locs in per_q.items():
        locs.sort(key=lambda l: l.time)
        times = [l.time for l in locs]
        assert len(times) == len(set(times)), "qubit used twice in one moment"
        assert times == list(range(times[0], times[-1] + 1)), "gap in a live qubit's timeline"
        if q not in inputs:
            assert locs[0].kind == PREP
        else:
            starts.add(times[0])
        assert locs[-1].kind == MEAS or times[-1] == c.n_moments - 1
    # input blocks go live together (ancilla factories may run earlier)
    assert len(starts) <= 1
    assert [l.id for l in c.locations] == list(range(len(c.locations)))


def test_cnot_exrec_size_stable():
    a, b = cnot_exrec(SEVEN), cnot_exrec(SEVEN)
    assert len(a.locations) == len(b.locations) == 651
    assert a.n_physical == 126
    assert circuit_text(a) == circuit_text(b)


def test_circuit_text_parses():
    from stabkit.clifford import parse_circuit
    for name in ["steane-ec", "cnot", "pi8", "cat-4"]:
        g = build_gadget(SEVEN, name)
        ins, n = parse_circuit(circuit_text(g))
        assert n == g.n_physical and len(ins) == len(g.locations)
    with pytest.raises(UnsupportedError):
        build_gadget(SEVEN, "nope")


# ---------------------------------------------------------------- frame propagation

def test_x_before_cnot_control_spreads():
    c = transversal_gate(SEVEN, "CNOT")
    blocks, rec, rej, _ = propagate(c, FaultPattern(), {"a": single(7, 0, "X")})
    assert blocks["a"].letters() == "XIIIIII" and blocks["b"].letters() == "XIIIIII"


def test_empty_pattern_gives_identity_frames():
    for c in ALL:
        eng = FrameEngine(c)
        res = eng.run(1, ([], [], []))
        assert not res.x.any() and not res.z.any() and not res.records.any() and not res.rejected.any()


def test_transversal_h_turns_x_into_z():
    c = transversal_gate(SEVEN, "H")
    for i in range(7):
        blocks, *_ = propagate(c, FaultPattern(), {"in": single(7, i, "X")})
        assert blocks["in"].letters() == single(7, i, "Z").letters()


def test_transversal_cnot_maps_logical_x():
    c = transversal_gate(SEVEN, "CNOT")
    lx = SEVEN.logical_x[0]
    blocks, *_ = propagate(c, FaultPattern(), {"a": lx})
    assert blocks["a"].letters() == lx.letters() == blocks["b"].letters()


def test_fault_codes_round_trip():
    for nq in (1, 2):
        for code in range(1, 4 ** nq):
            assert pauli_code_of(pauli_of_code(code, nq)) == code


def test_fault_pattern_json_round_trip():
    c = steane_ec(SEVEN)
    fp = FaultPattern.of(c, [(3, "Y"), (10, "Z")])
    assert FaultPattern.from_json(fp.to_json()).to_json() == fp.to_json()


@pytest.mark.parametrize("make,inputs", [
    (lambda: steane_ec(SEVEN), {"in": (SEVEN, "0")}),
    (lambda: knill_ec(SEVEN), {"in": (SEVEN, "+")}),
    (lambda: shor_ec(FIVE), {"in": (FIVE, "0")}),
    (lambda: prep_logical(SEVEN, "+"), {}),
    (lambda: prep_logical(FIVE, "0", "shor_project"), {}),
    (lambda: cnot_exrec(SEVEN), {"a": (SEVEN, "+"), "b": (SEVEN, "0")}),
])
def test_frames_agree_with_tableau_execution(make, inputs):
    c = make()
    rng = np.random.default_rng(17)
    for trial in range(12):
        k = int(rng.integers(0, 4))
        lids = rng.choice(len(c.locations), k, replace=False)
        pairs = []
        for lid in lids:
            nq = len(c.locations[lid].qubits)
            pairs.append((int(lid), pauli_of_code(int(rng.integers(1, 4 ** nq)), nq)))
        rec_ok, st_ok, _ = replay(c, FaultPattern.of(c, pairs), inputs, seed=trial)
        assert rec_ok and st_ok


# ---------------------------------------------------------------- cat states

def cat_stab_min_weight(x, z, m):
    """Weight of a frame on an m-qubit cat, minimized over the cat stabilizer group."""
    best = m
    gens = [(np.zeros(m, np.uint8), np.eye(m, dtype=np.uint8)[i] ^ np.eye(m, dtype=np.uint8)[i + 1])
            for i in range(m - 1)] + [(np.ones(m, np.uint8), np.zeros(m, np.uint8))]
    for bits in itertools.product([0, 1], repeat=m):
        gx, gz = x.copy(), z.copy()
        for b, (sx, sz) in zip(bits, gens):
            if b:
                gx ^= sx
                gz ^= sz
        best = min(best, int(np.count_nonzero(gx | gz)))
    return best


@pytest.mark.parametrize("m", [2, 3, 4, 6])
def test_cat_clean_is_exact(m):
    c = cat_state_circuit(m)
    ex = execute_dense(c, rng=np.random.default_rng(0))
    assert not ex.rejected
    cat = c.blocks["cat"]
    fixed = {q: 0 for q in ex.measured}
    v = block_state(ex.state.amplitudes, c.n_physical, list(cat), fixed)
    want = np.zeros(1 << m, complex)
    want[0] = want[-1] = 1 / np.sqrt(2)
    assert fidelity(v, want) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("m", [3, 4, 5, 6])
def test_verified_cat_single_faults(m):
    c = cat_state_circuit(m)
    eng = FrameEngine(c)
    cat = list(c.blocks["cat"])
    for L, C in iter_patterns(c, 1):
        res = eng.run(L.shape[0], (np.arange(L.shape[0]), L[:, 0], C[:, 0]))
        for j in np.nonzero(~res.rejected)[0]:
            assert cat_stab_min_weight(res.x[cat, j], res.z[cat, j], m) <= 1


def test_unverified_ladder_fault_spreads_and_is_caught():
    c = cat_state_circuit(4)
    # X on the fan-out qubit after its second CNOT reaches only the last target: X0 X3,
    # which is weight 2 even modulo XXXX
    fan = [l for l in c.locations if l.op == "CNOT" and l.qubits[0] == c.blocks["cat"][0]]
    blocks, rec, rejected, _ = propagate(c, FaultPattern.of(c, [(fan[1].id, "XI")]))
    f = blocks["cat"]
    assert cat_stab_min_weight(f.x.copy(), f.z.copy(), 4) >= 2
    assert rejected


def test_cat_hadamard_readout_parity():
    m = 4
    c = cat_state_circuit(m)
    for flip in (False, True):
        ex = execute_dense(c, rng=np.random.default_rng(1))
        st = ex.state
        cat = c.blocks["cat"]
        if flip:
            st.apply_pauli(single(c.n_physical, cat[0], "Z"))
        rng = np.random.default_rng(2)
        bits = [st.measure(single(c.n_physical, q, "X"), rng)[0] for q in cat]
        assert int(np.prod(bits)) == (-1 if flip else 1)


# ---------------------------------------------------------------- error correction gadgets

def test_shor_ec_consensus_and_correction():
    c = shor_ec(FIVE)
    blocks, rec, rej, readouts = propagate(c, FaultPattern(), {"in": single(5, 0, "X")})
    packed = int(np.asarray(readouts["ec/syndrome"]).ravel()[0])   # generator i at bit i
    assert [(packed >> i) & 1 for i in range(4)] == [0, 0, 0, 1]
    assert blocks["in"].weight == 0
    blocks, rec, rej, readouts = propagate(c, FaultPattern(), {})
    assert not np.asarray(readouts["ec/syndrome"]).any() and blocks["in"].weight == 0


def test_shor_ec_outvotes_one_cat_phase_fault():
    c = shor_ec(FIVE)
    cat_prep = [l for l in c.locations if l.group.startswith("ec/r0") and l.kind == PREP]
    fp = FaultPattern.of(c, [(cat_prep[0].id, "Z")])
    blocks, rec, rej, readouts = propagate(c, fp, {"in": single(5, 2, "Z")})
    if not rej:
        assert blocks["in"].weight == 0
    for prop in ("ECA", "ECB"):
        assert check_property(c, prop).verdict


def test_steane_ec_decodes_input_error():
    c = steane_ec(SEVEN)
    blocks, rec, rej, _ = propagate(c, FaultPattern(), {"in": single(7, 2, "X")})
    assert blocks["in"].weight == 0 and not rej
    mz = [l.record for l in c.locations if l.kind == MEAS and l.op == "Z" and l.group == "ec"]
    assert list(rec[mz]) == [0, 0, 1, 0, 0, 0, 0]


def _logical_z_value(tab, qubits, code):
    from stabkit.ft.execute import _embed
    out = []
    for p in list(code.generators) + [code.logical_z[0]]:
        e = _embed(tab.n, qubits, p.x, p.z)
        o, det = tab.copy().measure(PauliOperator(e.x, e.z, p.phase))
        out.append((o, det))
    return out


@pytest.mark.parametrize("make", [steane_ec, knill_ec])
def test_clean_ec_preserves_logical_zero(make):
    c = make(SEVEN)
    for seed in range(8):
        ex = execute_tableau(c, np.random.default_rng(seed), {"in": (SEVEN, "0")})
        assert not ex.rejected
        vals = _logical_z_value(ex.state, c.blocks[c.outputs[0]], SEVEN)
        assert all(det and o == 1 for o, det in vals)


def test_steane_support_claim():
    holds, checked, ce = steane_support_check(steane_ec(SEVEN))
    assert holds and ce is None and checked > 40000


# ---------------------------------------------------------------- preparation and measurement

def test_verified_prep_clean_is_exact_zero():
    c = prep_logical(SEVEN, "0")
    ex = execute_dense(c, rng=np.random.default_rng(0))
    assert not ex.rejected
    fixed = {q: int(ex.records[l.record]) for l in c.locations if l.kind == MEAS for q in l.qubits}
    v = block_state(ex.state.amplitudes, c.n_physical, list(c.blocks["out"]), fixed)
    assert fidelity(v, codeword_basis(SEVEN)[0]) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("code,state", [(SEVEN, "0"), (SEVEN, "+"), (FIVE, "0"), (FIVE, "+")])
def test_shor_projection_prepares_logical_state(code, state):
    c = prep_logical(code, state, "shor_project")
    from stabkit.ft.gadgets import extended_code
    from stabkit.ft.execute import _embed
    ext = extended_code(code, state)
    for seed in range(4):
        ex = execute_tableau(c, np.random.default_rng(seed))
        for g in ext.generators:
            e = _embed(ex.state.n, c.blocks["out"], g.x, g.z)
            o, det = ex.state.copy().measure(PauliOperator(e.x, e.z, g.phase))
            assert det and o == 1


def test_measurement_gadgets_read_logical_value():
    for c in (measurement_gadget(SEVEN), knill_measurement(SEVEN)):
        for seed in range(4):
            ex = execute_tableau(c, np.random.default_rng(seed), {"in": (SEVEN, "0")})
            assert int(np.asarray(ex.readouts["m"]).ravel()[0]) == 0
        seen = {int(np.asarray(execute_tableau(c, np.random.default_rng(s), {"in": (SEVEN, "+")}).readouts["m"]).ravel()[0])
                for s in range(16)}
        assert seen == {0, 1}


# ---------------------------------------------------------------- dense checks

def test_transversal_h_is_logical_h():
    zero, one = codeword_basis(SEVEN)
    st = DenseState(7, zero.copy())
    for q in range(7):
        st.apply(Gate("H", (q,)))
    assert fidelity(st.amplitudes, (zero + one) / np.sqrt(2)) == pytest.approx(1.0, abs=1e-12)


def test_transversal_phase_choice():
    assert transversal_phase(SEVEN) == "PDG"
    zero, one = codeword_basis(SEVEN)
    v = (zero + one) / np.sqrt(2)
    st = DenseState(7, v.copy())
    for q in range(7):
        st.apply(Gate("PDG", (q,)))
    assert fidelity(st.amplitudes, (zero + 1j * one) / np.sqrt(2)) == pytest.approx(1.0, abs=1e-12)


def _pi8_run(inp, branch):
    c = gate_teleport_pi8(SEVEN)
    zero, one = codeword_basis(SEVEN)
    magic = (zero + np.exp(1j * np.pi / 4) * one) / np.sqrt(2)
    psi = np.kron(inp, magic)   # block "in" on qubits 0..6, "magic" on 7..13
    assert list(c.blocks["in"]) == list(range(7))
    lz = SEVEN.logical_z[0]
    # pin the measured word to a codeword of the requested logical parity
    word = np.zeros(7, np.uint8) if branch == 0 else SEVEN.logical_x[0].x.copy()
    recs = [l.record for l in c.locations if l.kind == MEAS]
    qs = [l.qubits[0] for l in c.locations if l.kind == MEAS]
    forced = {r: int(word[q]) for r, q in zip(recs, qs)}
    ex = execute_dense(c, psi, np.random.default_rng(0), forced=forced)
    assert int(np.asarray(ex.readouts["m"]).ravel()[0]) == branch
    out = block_state(ex.state.amplitudes, 14, list(c.blocks["magic"]), {q: int(word[q]) for q in qs})
    return out


@pytest.mark.parametrize("label", ["0", "1", "+"])
@pytest.mark.parametrize("branch", [0, 1])
def test_pi8_teleportation_dense(label, branch):
    zero, one = codeword_basis(SEVEN)
    a, b = {"0": (1, 0), "1": (0, 1), "+": (1 / np.sqrt(2), 1 / np.sqrt(2))}[label]
    inp = a * zero + b * one
    want = a * zero + b * np.exp(1j * np.pi / 4) * one
    out = _pi8_run(inp, branch)
    assert abs(fidelity(out, want) - 1) < 1e-9


def test_pi8_correction_identity():
    t = np.diag([1, np.exp(1j * np.pi / 4)])
    x = np.array([[0, 1], [1, 0]])
    pdg = np.diag([1, -1j])
    assert np.allclose(t @ x @ t.conj().T, np.exp(1j * np.pi / 4) * x @ pdg)


@pytest.mark.parametrize("theta", [0.3, 1.0, 2.5])
def test_nine_qubit_corrects_continuous_rotation(theta):
    zero, one = codeword_basis(NINE)
    psi = (0.6 * zero + 0.8j * one)
    st0 = DenseState(9, psi.copy())
    st0.apply_matrix(rotation_z(theta), (4,))
    gens = list(NINE.generators)
    branches = 0
    for bits in itertools.product([0, 1], repeat=len(gens)):
        st = st0.copy()
        try:
            for g, b in zip(gens, bits):
                st.measure(g, forced=1 - 2 * b)
        except ValueError:      # zero-probability branch
            continue
        branches += 1
        fix = NINE.correction_for(NINE.error_for_syndrome(np.array(bits, np.uint8)))
        st.apply_pauli(fix)
        assert abs(fidelity(st.amplitudes, psi) - 1) < 1e-9
    assert branches == 2


def test_dense_executor_respects_limit(monkeypatch):
    monkeypatch.setenv("STABKIT_DENSE_LIMIT", "10")
    with pytest.raises(ResourceLimitError):
        execute_dense(gate_teleport_pi8(SEVEN))


# ---------------------------------------------------------------- property checks

@pytest.mark.parametrize("gadget,props", [
    (steane_ec(SEVEN), ("ECA", "ECB")),
    (knill_ec(SEVEN), ("ECA", "ECB")),
    (shor_ec(SEVEN), ("ECA", "ECB")),
    (transversal_gate(SEVEN, "CNOT"), ("GateA", "GateB")),
    (transversal_gate(SEVEN, "H"), ("GateA", "GateB")),
    (transversal_gate(SEVEN, "P"), ("GateA", "GateB")),
    (transversal_gate(SEVEN, "X"), ("GateA", "GateB")),
    (prep_logical(SEVEN, "0"), ("PrepA", "PrepB")),
    (prep_logical(SEVEN, "+"), ("PrepA", "PrepB")),
    (prep_logical(SEVEN, "0", "shor_project"), ("PrepA", "PrepB")),
    (measurement_gadget(SEVEN, "Z"), ("Meas",)),
    (measurement_gadget(SEVEN, "X"), ("Meas",)),
    (knill_measurement(SEVEN), ("Meas",)),
], ids=lambda v: v if isinstance(v, tuple) else v.meta["kind"])
def test_properties_hold_at_t1(gadget, props):
    for prop in props:
        rep = check_property(gadget, prop, t=1, jobs=2)
        assert rep.verdict, rep.counterexample
        assert rep.evaluated == rep.patterns - rep.rejected > 0


def test_property_errors():
    with pytest.raises(UnsupportedError):
        check_property(steane_ec(SEVEN), "GateA")
    with pytest.raises(ResourceLimitError):
        check_property(steane_ec(SEVEN), "ECB", cap=10)


def broken_steane_ec():
    """Steane EC whose X correction lands one qubit to the right."""
    c = steane_ec(SEVEN)
    classical = []
    for cs in c.classical:
        if isinstance(cs, FeedForward):
            t = cs.targets
            cs = replace(cs, targets=t[1:] + t[:1])
        classical.append(cs)
    return replace(c, classical=classical)


def test_broken_ec_counterexample_replays():
    bad = broken_steane_ec()
    rep = check_property(bad, "ECB")
    assert not rep.verdict and rep.counterexample is not None
    assert replay_counterexample(bad, rep)
    # the serialized report replays too
    data = parse_report(emit_report(rep, "json"), "json")
    assert data["verdict"] is False
    assert replay_counterexample(bad, data)
    assert not replay_counterexample(steane_ec(SEVEN), rep)


def test_filter_and_star_decoder_agree():
    # 0-filter passes exactly the normalizer elements: syndrome zero
    n = 7
    for w in (1, 2, 3):
        from stabkit.pauli import lex_digits, digits_to_xz
        x, z = digits_to_xz(lex_digits(n, w))
        keep = SEVEN.coset_min_weight(x, z) == 0
        ax, az = SEVEN.ideal_decode(x[keep], z[keep])
        sx, sz, syn = SEVEN.star_decode(x[keep], z[keep])
        assert np.array_equal(ax, sx) and np.array_equal(az, sz) and not syn.any()


def test_pattern_counts():
    c = steane_ec(SEVEN)
    n1 = sum(l.n_paulis for l in c.locations)
    assert count_patterns(c, 1) == n1
    assert sum(L.shape[0] for L, _ in iter_patterns(c, 1)) == n1
    small = transversal_gate(SEVEN, "H")
    assert count_patterns(small, 2) == sum(1 for L, _ in iter_patterns(small, 2) for _ in L) == 21 * 9
