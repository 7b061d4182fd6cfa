from .instructions import Gate, MeasurePauli, Prep, Wait, H, P, CNOT, MATRICES, gate_matrix, rotation_z
from .tableau import Tableau, apply_gate, measure_pauli, run_tableau, symplectic_of, is_symplectic_matrix
from .dense import DenseState, dense_run, fidelity
from .textformat import parse_circuit, format_circuit
from .check import clifford_vs_dense_check, random_clifford_circuit, OracleReport
