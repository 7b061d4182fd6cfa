"""Shared test utilities: tableau replay of frame predictions."""
import numpy as np

from stabkit.clifford.tableau import Tableau
from stabkit.ft.execute import execute_tableau
from stabkit.ft.frame import FrameEngine
from stabkit.ft.circuit import pauli_code_of
from stabkit.pauli import PauliOperator


def same_state_up_to_frame(faulty, ref, fx, fz, measured):
    """True if the faulty tableau equals frame * reference on unmeasured qubits."""
    a = faulty.copy()
    b = ref.copy()
    for q in measured:
        a.prep(q, "0")
        b.prep(q, "0")
    keep = np.ones(len(fx), bool)
    keep[list(measured)] = False
    b.pauli(PauliOperator(fx * keep, fz * keep))
    for g in a.stabilizers():
        out, det = b.copy().measure(g)
        if not det or out != 1:
            return False
    return True


def replay(circuit, faults, inputs, seed):
    """Run reference and faulty tableaus; compare with the frame prediction.

    Returns (records_match, state_match, frame result).
    """
    ref = execute_tableau(circuit, np.random.default_rng(seed), inputs)
    eng = FrameEngine(circuit)
    pats = [0] * len(faults.faults)
    locs = [l for l, _ in faults.faults]
    codes = [pauli_code_of(p) for _, p in faults.faults]
    fr = eng.run(1, (pats, locs, codes))
    flips = fr.records[:, 0]
    forced = {i: int(ref.records[i] ^ flips[i]) for i in range(circuit.n_records)}
    bad = execute_tableau(circuit, np.random.default_rng(seed), inputs, faults, forced)
    rec_ok = np.array_equal(bad.records, ref.records ^ flips)
    st_ok = same_state_up_to_frame(bad.state, ref.state, fr.x[:, 0], fr.z[:, 0], ref.measured)
    return rec_ok, st_ok, fr
