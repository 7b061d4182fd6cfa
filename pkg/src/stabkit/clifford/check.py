"""Cross-checking the tableau simulator against the dense oracle."""
from dataclasses import dataclass, field

import numpy as np

from ..pauli import PauliOperator
from .dense import dense_run, DenseState
from .instructions import Gate, MeasurePauli
from .tableau import run_tableau

_GATES1 = ("H", "P", "X", "Y", "Z")


def random_clifford_circuit(n, n_gates, n_meas, rng):
    """Random H/P/CNOT/Pauli circuit with ``n_meas`` random Pauli measurements interleaved."""
    ops = []
    for _ in range(n_gates):
        if n > 1 and rng.random() < 0.4:
            c, t = rng.choice(n, 2, replace=False)
            ops.append(Gate("CNOT", (int(c), int(t))))
        else:
            ops.append(Gate(_GATES1[rng.integers(len(_GATES1))], (int(rng.integers(n)),)))
    for _ in range(n_meas):
        while True:
            d = rng.integers(4, size=n)
            if d.any():
                break
        x = ((d == 1) | (d == 2)).astype(np.uint8)
        z = ((d == 2) | (d == 3)).astype(np.uint8)
        m = PauliOperator(x, z, 2 * int(rng.integers(2)))
        ops.insert(int(rng.integers(len(ops) + 1)), MeasurePauli(m))
    return ops


def _stabilized(state, stabs, tol):
    worst = 0.0
    for s in stabs:
        worst = max(worst, float(np.linalg.norm(state.amplitudes - state.__class__(state.n, state.amplitudes).apply_pauli(s).amplitudes)))
    return worst <= tol, worst


@dataclass
class OracleReport:
    circuits: int = 0
    measurements: int = 0
    deterministic: int = 0
    random: int = 0
    mismatches: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.mismatches


def clifford_vs_dense_check(circuit, n, seeds, tol=1e-9, report=None):
    """Replay the tableau's sampled branch on the dense simulator for each seed.

    Deterministic tableau outcomes must have dense probability 1, random ones
    probability 1/2, and after every measurement (and at the end) the dense
    state must be stabilized by every tableau stabilizer row.
    """
    rep = report or OracleReport()
    for seed in seeds:
        rng = np.random.default_rng(seed)
        outs, det, tab, snaps = run_tableau(circuit, n, rng, record=True)
        rep.circuits += 1
        st = DenseState(n)
        mi = 0
        for ins in circuit:
            if isinstance(ins, MeasurePauli):
                o, p = st.measure(ins.pauli, forced=outs[mi])
                rep.measurements += 1
                want = 1.0 if det[mi] else 0.5
                if det[mi]:
                    rep.deterministic += 1
                else:
                    rep.random += 1
                if abs(p - want) > tol:
                    rep.mismatches.append((seed, mi, "probability", p, want))
                good, worst = _stabilized(st, snaps[mi], tol)
                if not good:
                    rep.mismatches.append((seed, mi, "post-measurement state", worst))
                mi += 1
            else:
                st.apply(ins)
        good, worst = _stabilized(st, tab.stabilizers(), tol)
        if not good:
            rep.mismatches.append((seed, None, "final state", worst))
    return rep
