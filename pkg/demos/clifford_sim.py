"""Tableau simulation next to the dense simulator."""
import numpy as np

from stabkit.clifford import (Tableau, H, CNOT, MeasurePauli, run_tableau, dense_run, parse_circuit,
                              random_clifford_circuit, clifford_vs_dense_check, symplectic_of)
from stabkit.pauli import PauliOperator

# GHZ state: stabilizers XXX, ZZI, IZZ
t = Tableau(3)
for g in [H(0), CNOT(0, 1), CNOT(1, 2)]:
    t.apply(g)
print([str(s) for s in t.stabilizers()])

# ZZI is deterministic, ZII is a coin flip
rng = np.random.default_rng(1)
print(t.measure(PauliOperator.from_string("ZZI"), rng))   # (1, True)
print(t.measure(PauliOperator.from_string("ZII"), rng))

# the symplectic matrix of CNOT
print(symplectic_of([CNOT(0, 1)], 2))

# same circuit through both engines; XX is fixed at +1, ZI is sampled separately by each
ins, n = parse_circuit("QUBITS 2\nH 0\nCNOT 0 1\nMEAS XX\nMEAS ZI\n")
print("tableau:", run_tableau(ins, n, np.random.default_rng(3))[0])
print("dense:  ", dense_run(ins, n, np.random.default_rng(3))[0])

# random circuits, checked branch by branch
rng = np.random.default_rng(7)
circ = random_clifford_circuit(6, 40, 3, rng)
print("agree:", clifford_vs_dense_check(circ, 6, range(5)).ok)
