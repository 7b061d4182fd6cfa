"""Inject faults into Steane error correction and check the gadget contracts."""
import numpy as np

from stabkit.codes import get_code
from stabkit.ft import steane_ec, cnot_exrec, FaultPattern, propagate, check_property, circuit_text
from stabkit.ft.circuit import GATE2
from stabkit.pauli import PauliOperator

seven = get_code("seven_qubit")
ec = steane_ec(seven)
print(len(ec.locations), "locations,", ec.n_physical, "qubits")
print(circuit_text(ec).splitlines()[:6])

# an X error on the data is removed by one round
x3 = PauliOperator.from_string("IIIXIII")
blocks, rec, rejected, _ = propagate(ec, FaultPattern(), {"in": x3})
print("residual:", blocks["in"], "rejected:", rejected)

# an XX fault after one coupling CNOT
cnots = [l for l in ec.locations if l.kind == GATE2 and l.group == "ec"]
blocks, *_ = propagate(ec, FaultPattern([(cnots[0].id, PauliOperator.from_string("XX"))]), {})
print("after one CNOT fault:", blocks["in"])

# exhaustive single-fault checks
for prop in ("ECA", "ECB"):
    rep = check_property(ec, prop)
    print(prop, rep.verdict, rep.evaluated, "patterns")

ex = cnot_exrec(seven)
print("CNOT ExRec:", len(ex.locations), "locations")
