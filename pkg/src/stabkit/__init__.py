"""Stabilizer codes, Clifford simulation and fault-tolerance analysis."""
from .pauli import PauliOperator, GF4Vector, multiply, commutes, gf4_encode, gf4_decode, trace_inner

__version__ = "0.1.0"
