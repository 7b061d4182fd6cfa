"""Text formats for stabilizer codes and binary matrices."""
import numpy as np

from ..errors import ParseError
from ..pauli import PauliOperator
from .stabilizer import StabilizerCode


def _lines(text):
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line


def parse_code(text, name=""):
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty code file")
    header = dict(tok.split("=", 1) for tok in lines[0].split() if "=" in tok)
    if "n" not in header or "k" not in header:
        raise ParseError("header must be 'n=<int> k=<int>'")
    try:
        n, k = int(header["n"]), int(header["k"])
    except ValueError as exc:
        raise ParseError(f"bad header {lines[0]!r}") from exc
    name = header.get("name", name)
    section = "gens"
    parts = {"gens": [], "LX": [], "LZ": []}
    for line in lines[1:]:
        if line in ("LX:", "LZ:"):
            section = line[:-1]
            continue
        p = PauliOperator.from_string(line)
        if p.n != n:
            raise ParseError(f"Pauli {line!r} has length {p.n}, header says n={n}")
        parts[section].append(p)
    if len(parts["gens"]) != n - k:
        raise ParseError(f"expected {n - k} generators, found {len(parts['gens'])}")
    lx = parts["LX"] or None
    lz = parts["LZ"] or None
    if not parts["gens"]:
        code = StabilizerCode.empty(n, name=name)
        code._lx = tuple(lx) if lx else None
        code._lz = tuple(lz) if lz else None
        return code
    return StabilizerCode(parts["gens"], lx, lz, name=name)


def format_code(code, logicals=True):
    out = [f"n={code.n} k={code.k}"]
    out += [str(g) if g.phase else g.letters() for g in code.generators]
    if logicals and code.k:
        out.append("LX:")
        out += [p.letters() for p in code.logical_x]
        out.append("LZ:")
        out += [p.letters() for p in code.logical_z]
    return "\n".join(out) + "\n"


def parse_matrix(text):
    rows = []
    for line in _lines(text):
        s = line.replace(" ", "")
        if set(s) - {"0", "1"}:
            raise ParseError(f"matrix row {line!r} is not binary")
        rows.append([int(c) for c in s])
    if not rows:
        raise ParseError("empty matrix")
    if len({len(r) for r in rows}) != 1:
        raise ParseError("matrix rows differ in length")
    return np.array(rows, np.uint8)


def format_matrix(m):
    return "\n".join("".join(str(int(b)) for b in row) for row in m) + "\n"
