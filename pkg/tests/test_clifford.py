import numpy as np
import pytest

from stabkit.clifford import (Gate, MeasurePauli, Prep, Wait, H, P, CNOT, Tableau, run_tableau,
                              symplectic_of, is_symplectic_matrix, DenseState, dense_run, fidelity,
                              parse_circuit, format_circuit, random_clifford_circuit,
                              clifford_vs_dense_check, gate_matrix, rotation_z, MATRICES)
from stabkit.errors import ParseError, UnsupportedError, ResourceLimitError
from stabkit.codes import get_code
from stabkit.pauli import PauliOperator
import oracle


def Pa(s):
    return PauliOperator.from_string(s)


def stab_strings(t):
    return sorted(str(p) for p in t.stabilizers())


def test_h_maps_z_to_x():
    t = Tableau(1)
    t.apply(H(0))
    assert stab_strings(t) == ["+X"]


def test_h_conjugates_y_to_minus_y():
    t = Tableau(1).apply(H(0)).apply(P(0))
    assert stab_strings(t) == ["+Y"]
    t.apply(H(0))
    assert stab_strings(t) == ["-Y"]
    m = oracle.H @ oracle.Y @ oracle.H
    assert np.allclose(m, -oracle.Y)


def test_cnot_conjugation():
    s = symplectic_of([CNOT(0, 1)], 2)
    xi = np.array([1, 0, 0, 0])
    iz = np.array([0, 0, 0, 1])
    assert list(s @ xi % 2) == [1, 1, 0, 0]
    assert list(s @ iz % 2) == [0, 0, 1, 1]
    c = oracle.CNOT
    assert np.allclose(c @ oracle.pauli_matrix("XI") @ c, oracle.pauli_matrix("XX"))
    assert np.allclose(c @ oracle.pauli_matrix("IZ") @ c, oracle.pauli_matrix("ZZ"))


def test_symplectic_matrices():
    assert np.array_equal(symplectic_of([], 3), np.eye(6, dtype=np.uint8))
    h = symplectic_of([H(0)], 1)
    assert np.array_equal(h, np.array([[0, 1], [1, 0]]))
    rng = np.random.default_rng(11)
    gates = [g for g in random_clifford_circuit(6, 20, 0, rng)]
    s = symplectic_of(gates, 6)
    assert is_symplectic_matrix(s)
    t = Tableau(6)
    for g in gates:
        t.apply(g)
    assert t.is_symplectic()


def test_symplectic_matches_matrix_conjugation():
    rng = np.random.default_rng(5)
    n = 3
    gates = [g for g in random_clifford_circuit(n, 15, 0, rng)]
    u = np.eye(1 << n, dtype=complex)
    for g in gates:
        u = oracle.embed(MATRICES[g.kind], g.qubits, n) @ u
    s = symplectic_of(gates, n)
    for col in range(2 * n):
        v = np.zeros(2 * n, np.uint8)
        v[col] = 1
        img = PauliOperator.from_symplectic(s @ v % 2)
        src = PauliOperator.from_symplectic(v)
        conj = u @ oracle.pauli_matrix(src.letters()) @ u.conj().T
        assert oracle.equal_up_to_phase(conj, oracle.pauli_matrix(img.letters()))


def test_tableau_rows_relations():
    rng = np.random.default_rng(2)
    t = Tableau(5)
    for g in random_clifford_circuit(5, 40, 0, rng):
        t.apply(g)
    stabs, destabs = t.stabilizers(), t.destabilizers()
    for i, s in enumerate(stabs):
        for j, d in enumerate(destabs):
            assert s.commutes(d) == (i != j)
        for s2 in stabs:
            assert s.commutes(s2)


def test_measure_plus_random_and_collapses():
    outs = set()
    for seed in range(20):
        t = Tableau(1).apply(H(0))
        o, det = t.measure(Pa("Z"), np.random.default_rng(seed))
        assert not det
        outs.add(o)
        assert stab_strings(t) == ["+Z" if o == 1 else "-Z"]
    assert outs == {1, -1}


def test_nine_qubit_codeword_zz_deterministic():
    nine = get_code("nine_qubit")
    t = Tableau(9)
    rng = np.random.default_rng(0)
    for g in nine.generators:
        o, _ = t.measure(g, rng)
        if o == -1:   # flip into the +1 eigenspace with a destabilizing Pauli
            fix = nine.error_for_syndrome(np.array([int(h is g) for h in nine.generators], np.uint8))
            t.pauli(fix)
    o, det = t.measure(Pa("ZZIIIIIII"), rng)
    assert det and o == 1


def test_syndrome_by_measurement():
    five = get_code("five_qubit")
    t = Tableau(5)
    rng = np.random.default_rng(1)
    for i, g in enumerate(five.generators):
        if t.measure(g, rng)[0] == -1:
            t.pauli(five.error_for_syndrome(np.eye(4, dtype=np.uint8)[i]))
    t.pauli(Pa("XIIII"))
    bits = [int(t.measure(g, rng)[0] == -1) for g in five.generators]
    assert bits == [0, 0, 0, 1] == list(five.syndrome(Pa("XIIII")))


def test_identity_and_bell_circuits():
    outs, det, _ = run_tableau([MeasurePauli(Pa("ZI")), MeasurePauli(Pa("IZ"))], 2, np.random.default_rng(0))
    assert outs == [1, 1] and all(det)
    bell = [H(0), CNOT(0, 1), MeasurePauli(Pa("XX")), MeasurePauli(Pa("ZZ"))]
    outs, det, _ = run_tableau(bell, 2, np.random.default_rng(0))
    assert outs == [1, 1] and all(det)
    psi = oracle.CNOT @ np.kron(oracle.H, oracle.I2) @ np.array([1, 0, 0, 0], complex)
    for s in ("XX", "ZZ"):
        assert np.allclose(oracle.pauli_matrix(s) @ psi, psi)


def _oracle_run(circuit, n, outcomes):
    """Dense replay with kron matrices; returns the probability of each forced outcome."""
    psi = np.zeros(1 << n, complex)
    psi[0] = 1
    probs = []
    k = 0
    for ins in circuit:
        if isinstance(ins, MeasurePauli):
            m = oracle.pauli_matrix(str(ins.pauli))
            proj = (np.eye(1 << n) + outcomes[k] * m) / 2
            v = proj @ psi
            p = float(np.vdot(v, v).real)
            probs.append(p)
            psi = v / np.sqrt(p) if p > 1e-12 else v
            k += 1
        else:
            psi = oracle.embed(MATRICES[ins.kind], ins.qubits, n) @ psi
    return probs, psi


def test_random_circuits_against_kron_oracle():
    rng = np.random.default_rng(2024)
    for c in range(25):
        n = int(rng.integers(2, 6))
        circ = random_clifford_circuit(n, 30, 3, rng)
        outs, det, tab = run_tableau(circ, n, np.random.default_rng(c))
        probs, psi = _oracle_run(circ, n, outs)
        for o, d, p in zip(outs, det, probs):
            assert abs(p - (1.0 if d else 0.5)) < 1e-9
        for s in tab.stabilizers():
            assert np.allclose(oracle.pauli_matrix(str(s)) @ psi, psi, atol=1e-9)


def test_clifford_vs_dense_check_hundred_circuits():
    rng = np.random.default_rng(7)
    rep = None
    for c in range(100):
        circ = random_clifford_circuit(8, 50, 3, rng)
        from stabkit.clifford.check import OracleReport
        rep = clifford_vs_dense_check(circ, 8, [c], report=rep or OracleReport())
    assert rep.ok and rep.circuits == 100 and rep.measurements == 300


def test_dense_gates_match_definitions():
    assert np.allclose(gate_matrix(H(0)) @ gate_matrix(H(0)), np.eye(2))
    t = MATRICES["T"]
    lhs = t @ oracle.X @ t.conj().T
    rhs = np.exp(1j * np.pi / 4) * oracle.X @ MATRICES["PDG"]
    assert np.allclose(lhs, rhs)
    for theta in (0.3, 1.0, 2.5):
        r = rotation_z(theta)
        assert oracle.equal_up_to_phase(r, np.cos(theta / 2) * oracle.I2 - 1j * np.sin(theta / 2) * oracle.Z)


def test_dense_state_measure_and_prep():
    st = DenseState(2)
    st.apply(H(0))
    o, p = st.measure(Pa("ZI"), forced=-1)
    assert o == -1 and abs(p - 0.5) < 1e-12
    st.prep(0, "+")
    assert abs(st.expectation(Pa("XI")) - 1) < 1e-12
    assert fidelity(st, st.copy()) == pytest.approx(1.0)


def test_non_clifford_rejected_by_tableau():
    with pytest.raises(UnsupportedError):
        Tableau(1).apply(Gate("T", (0,)))


def test_dense_limit_env(monkeypatch):
    monkeypatch.setenv("STABKIT_DENSE_LIMIT", "3")
    with pytest.raises(ResourceLimitError):
        DenseState(4)


def test_circuit_text_round_trip():
    text = "QUBITS 3\nPREP 0 +\nH 1\nCNOT 0 1\nT 2\nMEAS ZZI\nWAIT 2\n"
    ins, n = parse_circuit(text)
    assert n == 3 and len(ins) == 6
    assert format_circuit(ins, n) == text
    with pytest.raises(ParseError):
        parse_circuit("FOO 1\n")
    with pytest.raises(ParseError):
        parse_circuit("QUBITS 2\nH 3\n")


def test_dense_run_with_t_gates():
    ins, n = parse_circuit("H 0\nT 0\nT 0\nH 0\n")  # H P H
    outs, probs, st = dense_run(ins + [MeasurePauli(Pa("Z"))], n, np.random.default_rng(0))
    assert abs(probs[0] - 0.5) < 1e-12
