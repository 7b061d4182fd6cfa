"""Fault-tolerant gadgets, Pauli-frame propagation and exhaustive property checks."""
from .circuit import Circuit, CircuitBuilder, Location, FaultPattern, pauli_code_of, pauli_of_code, circuit_text
from .frame import FrameEngine, FrameResult, propagate
from .gadgets import (css_data, steane_ec, knill_ec, shor_ec, prep_logical, cat_state_circuit,
                      transversal_gate, transversal_phase, measurement_gadget, knill_measurement,
                      gate_teleport_pi8, cnot_exrec, extended_code, build_gadget, GADGETS)
from .properties import (PROPERTIES, GadgetCheckReport, check_property, replay_counterexample,
                         steane_support_check)
from .execute import execute_tableau, execute_dense
