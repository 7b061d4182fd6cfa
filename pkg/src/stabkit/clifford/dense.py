"""Dense state-vector simulation for small registers (verification oracle)."""
import os

import numpy as np

from ..errors import ResourceLimitError
from ..pauli import PauliOperator, apply_to_state
from .instructions import Gate, MeasurePauli, Prep, Wait, gate_matrix

NORM_TOL = 1e-10


def dense_limit():
    return int(os.environ.get("STABKIT_DENSE_LIMIT", "16"))


class DenseState:
    """State vector over n qubits, qubit 0 the most significant index bit."""

    def __init__(self, n, amplitudes=None):
        if n > dense_limit():
            raise ResourceLimitError(f"dense simulation limited to {dense_limit()} qubits (n={n})")
        self.n = n
        if amplitudes is None:
            amplitudes = np.zeros(1 << n, complex)
            amplitudes[0] = 1.0
        self.amplitudes = np.asarray(amplitudes, dtype=complex)

    def copy(self):
        return DenseState(self.n, self.amplitudes.copy())

    def apply_matrix(self, u, qubits):
        n = self.n
        k = len(qubits)
        psi = self.amplitudes.reshape([2] * n)
        psi = np.tensordot(u.reshape([2] * (2 * k)), psi, axes=(list(range(k, 2 * k)), list(qubits)))
        psi = np.moveaxis(psi, list(range(k)), list(qubits))
        self.amplitudes = psi.reshape(-1)
        return self

    def apply(self, g):
        return self.apply_matrix(gate_matrix(g), g.qubits)

    def apply_pauli(self, p):
        self.amplitudes = apply_to_state(p, self.amplitudes)
        return self

    def expectation(self, p):
        return complex(np.vdot(self.amplitudes, apply_to_state(p, self.amplitudes)))

    def measure(self, m, rng=None, forced=None):
        """Projective measurement of Hermitian Pauli m; returns (outcome, probability)."""
        pm = apply_to_state(m, self.amplitudes)
        plus = 0.5 * (self.amplitudes + pm)
        p_plus = float(np.vdot(plus, plus).real)
        if forced is None:
            out = 1 if rng.random() < p_plus else -1
        else:
            out = forced
        proj = plus if out == 1 else 0.5 * (self.amplitudes - pm)
        prob = p_plus if out == 1 else 1.0 - p_plus
        if prob < 1e-12:
            raise ValueError("forced outcome has zero probability")
        self.amplitudes = proj / np.sqrt(prob)
        return out, prob

    def prep(self, q, state="0", rng=None):
        """Reset qubit q: measure Z (sampled with rng, else the +1 branch), flip on -1."""
        z = PauliOperator.single(self.n, q, "Z")
        pm = apply_to_state(z, self.amplitudes)
        plus = 0.5 * (self.amplitudes + pm)
        p_plus = float(np.vdot(plus, plus).real)
        if rng is not None:
            keep_plus = rng.random() < p_plus
        else:
            keep_plus = p_plus > 1e-12
        if keep_plus:
            v = plus
        else:
            v = apply_to_state(PauliOperator.single(self.n, q, "X"), 0.5 * (self.amplitudes - pm))
        self.amplitudes = v / np.linalg.norm(v)
        if state == "+":
            self.apply(Gate("H", (q,)))

    def norm_ok(self):
        return abs(np.linalg.norm(self.amplitudes) - 1) < NORM_TOL


def fidelity(a, b):
    """|<a|b>|^2 for normalized vectors (global phase ignored)."""
    a = a.amplitudes if isinstance(a, DenseState) else a
    b = b.amplitudes if isinstance(b, DenseState) else b
    return float(abs(np.vdot(a, b)) ** 2)


def dense_run(instructions, n, rng=None, forced=None, state=None):
    """Run instructions densely; returns (outcomes, probabilities, DenseState).

    ``forced`` optionally fixes measurement outcomes by index.
    """
    st = DenseState(n) if state is None else state
    outs, probs = [], []
    for ins in instructions:
        if isinstance(ins, Gate):
            st.apply(ins)
        elif isinstance(ins, MeasurePauli):
            f = None if forced is None else forced[len(outs)]
            o, p = st.measure(ins.pauli, rng, f)
            outs.append(o)
            probs.append(p)
        elif isinstance(ins, Prep):
            st.prep(ins.qubit, ins.state, rng)
        elif isinstance(ins, Wait):
            pass
        else:
            raise TypeError(f"unknown instruction {ins!r}")
    return outs, probs, st
