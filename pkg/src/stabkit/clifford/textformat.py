"""Line-oriented circuit text format.

    QUBITS 3
    PREP 0 +
    H 1
    CNOT 0 1
    T 2
    MEAS ZZI
    WAIT 2

``#`` starts a comment; ``TICK`` lines separate time steps and are kept
only by callers that care about scheduling.
"""
from ..errors import ParseError
from ..pauli import PauliOperator
from .instructions import Gate, MeasurePauli, Prep, Wait, ONE_QUBIT, TWO_QUBIT


def parse_circuit(text):
    """Parse circuit text; returns (instructions, n)."""
    instrs = []
    n = None
    top = -1
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        op = tok[0].upper()
        try:
            if op == "QUBITS":
                n = int(tok[1])
            elif op == "TICK":
                continue
            elif op == "MEAS":
                p = PauliOperator.from_string(tok[1])
                instrs.append(MeasurePauli(p))
                top = max(top, p.n - 1)
            elif op == "PREP":
                state = tok[2] if len(tok) > 2 else "0"
                if state not in ("0", "+"):
                    raise ParseError(f"line {lineno}: prep state must be 0 or +")
                instrs.append(Prep(int(tok[1]), state))
                top = max(top, int(tok[1]))
            elif op == "WAIT":
                instrs.append(Wait(int(tok[1])))
                top = max(top, int(tok[1]))
            elif op in ONE_QUBIT and op != "I" and len(tok) == 2:
                instrs.append(Gate(op, (int(tok[1]),)))
                top = max(top, int(tok[1]))
            elif op in TWO_QUBIT and len(tok) == 3:
                instrs.append(Gate(op, (int(tok[1]), int(tok[2]))))
                top = max(top, int(tok[1]), int(tok[2]))
            else:
                raise ParseError(f"line {lineno}: cannot parse {raw.strip()!r}")
        except (IndexError, ValueError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"line {lineno}: cannot parse {raw.strip()!r}") from exc
    if n is None:
        n = top + 1
    if top >= n:
        raise ParseError(f"qubit index {top} out of range for QUBITS {n}")
    for ins in instrs:
        if isinstance(ins, MeasurePauli) and ins.pauli.n != n:
            raise ParseError("MEAS string length does not match the qubit count")
    return instrs, n


def format_instruction(ins):
    if isinstance(ins, Gate):
        return " ".join([ins.kind] + [str(q) for q in ins.qubits])
    if isinstance(ins, MeasurePauli):
        p = ins.pauli
        return "MEAS " + ("-" if p.phase == 2 else "") + p.letters()
    if isinstance(ins, Prep):
        return f"PREP {ins.qubit} {ins.state}"
    if isinstance(ins, Wait):
        return f"WAIT {ins.qubit}"
    raise TypeError(f"cannot format {ins!r}")


def format_circuit(instructions, n):
    return "\n".join([f"QUBITS {n}"] + [format_instruction(i) for i in instructions]) + "\n"
