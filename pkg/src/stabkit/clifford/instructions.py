"""Instruction types shared by the tableau and dense simulators."""
from dataclasses import dataclass

import numpy as np

from ..pauli import PauliOperator

ONE_QUBIT = {"H", "P", "PDG", "X", "Y", "Z", "I", "T", "TDG"}
TWO_QUBIT = {"CNOT", "CZ", "CY"}
NON_CLIFFORD = {"T", "TDG", "U"}


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple
    matrix: object = None  # only for kind "U"

    def __post_init__(self):
        qs = tuple(int(q) for q in self.qubits)
        object.__setattr__(self, "qubits", qs)
        if self.kind in TWO_QUBIT and (len(qs) != 2 or qs[0] == qs[1]):
            raise ValueError(f"{self.kind} needs two distinct qubits")
        if self.kind in ONE_QUBIT and len(qs) != 1:
            raise ValueError(f"{self.kind} acts on one qubit")

    @property
    def is_clifford(self):
        return self.kind not in NON_CLIFFORD


def H(q):
    return Gate("H", (q,))


def P(q):
    return Gate("P", (q,))


def CNOT(c, t):
    return Gate("CNOT", (c, t))


@dataclass(frozen=True)
class MeasurePauli:
    pauli: PauliOperator


@dataclass(frozen=True)
class Prep:
    qubit: int
    state: str = "0"


@dataclass(frozen=True)
class Wait:
    qubit: int


SQRT_HALF = 1 / np.sqrt(2)
MATRICES = {
    "I": np.eye(2, dtype=complex),
    "H": np.array([[1, 1], [1, -1]], dtype=complex) * SQRT_HALF,
    "P": np.diag([1, 1j]),
    "PDG": np.diag([1, -1j]),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.diag([1, -1]).astype(complex),
    "T": np.diag([1, np.exp(1j * np.pi / 4)]),
    "TDG": np.diag([1, np.exp(-1j * np.pi / 4)]),
    "CNOT": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
    "CZ": np.diag([1, 1, 1, -1]).astype(complex),
    "CY": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, -1j], [0, 0, 1j, 0]], dtype=complex),
}


def gate_matrix(g):
    return g.matrix if g.kind == "U" else MATRICES[g.kind]


def rotation_z(theta):
    """exp(-i theta Z / 2) = cos(theta/2) I - i sin(theta/2) Z."""
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])
