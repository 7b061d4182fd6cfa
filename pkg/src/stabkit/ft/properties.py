"""Exhaustive checks of gadget properties under injected Pauli faults.

A property is checked for every fault pattern with s faulty locations
(every Pauli type at each) and every input residual allowed by r, over
all (r, s) with r + s <= t.  Residuals are judged on Pauli frames:

* the r-filter accepts a frame whose coset E*N(S) has minimum weight <= r
  (any state within r errors of some codeword);
* the ideal decoder applies the minimum-weight correction for the
  syndrome and reports the remaining logical class (ax, az).

Runs rejected by an ancilla verification are discarded, which matches
retrying the preparation until it passes.
"""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np

from ..errors import ResourceLimitError, UnsupportedError
from ..pauli import PauliOperator, lex_digits, digits_to_xz
from .circuit import FaultPattern, pauli_of_code, MEAS
from .frame import FrameEngine

PROPERTIES = ("PrepA", "PrepB", "GateA", "GateB", "Meas", "ECA", "ECB")
DEFAULT_CAP = 10 ** 9
ALIASES = {p.lower(): p for p in PROPERTIES}


@dataclass
class GadgetCheckReport:
    property: str
    t: int
    verdict: bool
    patterns: int = 0
    evaluated: int = 0
    rejected: int = 0
    counterexample: dict | None = None

    def to_dict(self):
        return {"property": self.property, "t": self.t, "verdict": self.verdict,
                "patterns": self.patterns, "evaluated": self.evaluated,
                "rejected": self.rejected, "counterexample": self.counterexample}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=False)


# ---------------------------------------------------------------- decoding helpers

def logical_map(logical):
    """Action of a logical Clifford on (ax, az) bit pairs, per block."""
    if logical == "CNOT":
        return lambda l: [(l[0][0], l[0][1] ^ l[1][1]), (l[1][0] ^ l[0][0], l[1][1])]
    if logical == "H":
        return lambda l: [(l[0][1], l[0][0])]
    if logical == "P":
        return lambda l: [(l[0][0], l[0][1] ^ l[0][0])]
    if logical in ("X", "Z", "I"):
        return lambda l: list(l)
    raise UnsupportedError(f"no logical map for {logical}")


def decode_blocks(code, res, names, circuit):
    out = []
    for name in names:
        x, z = res.block(circuit.blocks[name])
        out.append(code.ideal_decode(x, z))
    return out


def exrec_failures(circuit, res):
    """Failure flags for a gate ExRec: decoded output differs from the logical
    gate applied to the decoded frame after the leading ECs."""
    code = circuit.meta["code"]
    n = code.n
    lx, lz = res.checkpoints["lead"]
    nb = lx.shape[1] // n
    lead = [code.ideal_decode(lx[:, i * n:(i + 1) * n], lz[:, i * n:(i + 1) * n]) for i in range(nb)]
    want = logical_map(circuit.meta["logical"])(lead)
    got = decode_blocks(code, res, circuit.meta["out"], circuit)
    fail = np.zeros(lx.shape[0], bool)
    for (wx, wz), (gx, gz) in zip(want, got):
        fail |= np.any(wx != gx, axis=1) | np.any(wz != gz, axis=1)
    return fail


# ---------------------------------------------------------------- enumeration

def low_weight_frames(n, r):
    """All Paulis of weight <= r on n qubits as (x, z) arrays, identity first."""
    xs, zs = [np.zeros((1, n), np.uint8)], [np.zeros((1, n), np.uint8)]
    for w in range(1, r + 1):
        x, z = digits_to_xz(lex_digits(n, w))
        xs.append(x.astype(np.uint8))
        zs.append(z.astype(np.uint8))
    return np.vstack(xs), np.vstack(zs)


def syndrome_representatives(code):
    """One frame per syndrome class (the decoding-table leaders)."""
    tx, tz = code.decoding_table()
    return tx.copy(), tz.copy()


def count_patterns(circuit, s, locations=None):
    locs = circuit.locations if locations is None else [circuit.locations[i] for i in locations]
    if s == 0:
        return 1
    sizes = [l.n_paulis for l in locs]
    # elementary symmetric polynomial of the per-location Pauli counts
    e = [1] + [0] * s
    for m in sizes:
        for k in range(s, 0, -1):
            e[k] += e[k - 1] * m
    return e[s]


def iter_patterns(circuit, s, chunk=1 << 15, locations=None):
    """Yield (locs, codes) arrays of shape (P, s) covering every s-fault pattern."""
    ids = np.arange(len(circuit.locations)) if locations is None else np.asarray(locations)
    npaul = np.array([circuit.locations[i].n_paulis for i in ids])
    if s == 0:
        yield np.zeros((1, 0), np.int64), np.zeros((1, 0), np.int64)
        return
    if s == 1:
        L = np.repeat(ids, npaul)
        C = np.concatenate([np.arange(1, m + 1) for m in npaul])
        for a in range(0, L.size, chunk):
            yield L[a:a + chunk, None], C[a:a + chunk, None]
        return
    bufL, bufC, size = [], [], 0
    for combo in combinations(range(ids.size), s):
        codes = np.array(list(product(*[range(1, npaul[i] + 1) for i in combo])), np.int64)
        bufL.append(np.broadcast_to(ids[list(combo)], codes.shape))
        bufC.append(codes)
        size += codes.shape[0]
        if size >= chunk:
            yield np.vstack(bufL), np.vstack(bufC)
            bufL, bufC, size = [], [], 0
    if bufL:
        yield np.vstack(bufL), np.vstack(bufC)


def pattern_of(circuit, locs, codes):
    return FaultPattern.of(circuit, [(int(l), pauli_of_code(int(c), len(circuit.locations[l].qubits)))
                                     for l, c in zip(locs, codes)])


# ---------------------------------------------------------------- property evaluation

def _input_sets(gadget, prop, code, r):
    """List of {block: (x, z)} input frame arrays with total coset weight exactly <= r."""
    names = gadget.meta.get("in", ())
    if not names:
        return [dict()], [np.zeros(1, np.int64)]
    n = code.n
    if prop == "ECA":
        x, z = syndrome_representatives(code)
        return [{names[0]: (x, z)}], [None]
    x, z = low_weight_frames(n, r)
    w = code.coset_min_weight(x, z)
    if len(names) == 1:
        return [{names[0]: (x, z)}], [w]
    # two blocks: total weight <= r
    ia, ib = np.nonzero(w[:, None] + w[None, :] <= r)
    return [{names[0]: (x[ia], z[ia]), names[1]: (x[ib], z[ib])}], [(w[ia], w[ib])]


def _evaluate(gadget, prop, res, ins, s):
    """Failure flags (batch) for the property given frame results and inputs."""
    meta = gadget.meta
    code = meta["code"]
    kind = meta["kind"]
    outs = meta.get("out", ())
    if prop in ("ECA", "PrepA"):
        x, z = res.block(gadget.blocks[outs[0]])
        return code.coset_min_weight(x, z) > s
    if prop == "ECB":
        (ix, iz), = [ins[b] for b in meta["in"]]
        want = code.ideal_decode(ix, iz)
        got = code.ideal_decode(*res.block(gadget.blocks[outs[0]]))
        return np.any(want[0] != got[0], axis=1) | np.any(want[1] != got[1], axis=1)
    if prop == "PrepB":
        ax, az = code.ideal_decode(*res.block(gadget.blocks[outs[0]]))
        return np.any(ax if meta["state"] == "0" else az, axis=1)
    if prop == "GateA":
        bound = s + sum(code.coset_min_weight(*ins[b]) for b in meta["in"])
        fail = np.zeros(res.x.shape[1], bool)
        for b in outs:
            fail |= code.coset_min_weight(*res.block(gadget.blocks[b])) > bound
        return fail
    if prop == "GateB":
        lin = [code.ideal_decode(*ins[b]) for b in meta["in"]]
        want = logical_map(meta["logical"])(lin)
        got = decode_blocks(code, res, outs, gadget)
        fail = np.zeros(res.x.shape[1], bool)
        for (wx, wz), (gx, gz) in zip(want, got):
            fail |= np.any(wx != gx, axis=1) | np.any(wz != gz, axis=1)
        return fail
    if prop == "Meas":
        (ix, iz), = [ins[b] for b in meta["in"]]
        ax, az = code.ideal_decode(ix, iz)
        want = (ax if meta.get("basis", "Z") == "Z" else az)[:, 0]
        got = np.asarray(res.readouts["m"]).reshape(-1)
        return want != got
    raise UnsupportedError(f"unknown property {prop}")


APPLICABLE = {"ec": ("ECA", "ECB"), "gate": ("GateA", "GateB"), "prep": ("PrepA", "PrepB"),
              "meas": ("Meas",)}


def _normalize(prop):
    p = ALIASES.get(str(prop).lower().replace(" ", "").replace("_", ""))
    if p is None:
        raise ValueError(f"unknown property {prop!r}; expected one of {', '.join(PROPERTIES)}")
    return p


def _batches(gadget, prop, code, t, chunk):
    """Yield work units (s, r, inputs dict, input count, locs, codes)."""
    smax = t
    for s in range(0, smax + 1):
        r = t - s if prop != "ECA" else 0
        sets, _ = _input_sets(gadget, prop, code, r)
        ins = sets[0]
        ni = next(iter(ins.values()))[0].shape[0] if ins else 1
        per = max(1, chunk // ni)
        for L, C in iter_patterns(gadget, s, per):
            yield s, ins, ni, L, C


def _run_unit(engine, gadget, prop, unit):
    s, ins, ni, L, C = unit
    P = L.shape[0]
    B = P * ni
    # pattern p with input i is batch column p * ni + i
    cols = (np.arange(P)[:, None] * ni + np.arange(ni)[None, :])      # (P, ni)
    fp = np.repeat(cols, L.shape[1], axis=1).ravel() if L.shape[1] else np.zeros(0, np.int64)
    fl = np.tile(L, (1, ni)).reshape(P, ni, L.shape[1]).ravel() if L.shape[1] else np.zeros(0, np.int64)
    fc = np.tile(C, (1, ni)).reshape(P, ni, C.shape[1]).ravel() if C.shape[1] else np.zeros(0, np.int64)
    inputs = {b: (np.tile(x, (P, 1)), np.tile(z, (P, 1))) for b, (x, z) in ins.items()}
    res = engine.run(B, (fp, fl, fc) if fp.size else None, inputs or None)
    fail = _evaluate(gadget, prop, res, inputs, s) & ~res.rejected
    out = {"patterns": B, "rejected": int(res.rejected.sum()), "fail": None}
    if fail.any():
        j = int(np.nonzero(fail)[0][0])
        p, i = divmod(j, ni)
        fpat = pattern_of(gadget, L[p], C[p])
        inp = {b: PauliOperator(x[i], z[i]).letters() for b, (x, z) in ins.items()}
        out["fail"] = {"faults": fpat.to_json(), "inputs": inp, "s": s}
    return out


def check_property(gadget, prop, t=1, jobs=1, cap=DEFAULT_CAP, chunk=1 << 16):
    """Exhaustively check one property; returns a GadgetCheckReport."""
    prop = _normalize(prop)
    kind = gadget.meta.get("kind")
    if prop not in APPLICABLE.get(kind, ()):
        raise UnsupportedError(f"property {prop} does not apply to a {kind} gadget")
    if not gadget.is_clifford():
        raise UnsupportedError("gadget is not Clifford; use the dense executor")
    code = gadget.meta["code"]
    total = 0
    for s in range(t + 1):
        r = t - s if prop != "ECA" else 0
        sets, _ = _input_sets(gadget, prop, code, r)
        ni = next(iter(sets[0].values()))[0].shape[0] if sets[0] else 1
        total += ni * count_patterns(gadget, s)
    if total > cap:
        raise ResourceLimitError(f"{total} propagations exceed the enumeration cap {cap}")
    engine = FrameEngine(gadget)
    units = _batches(gadget, prop, code, t, chunk)
    report = GadgetCheckReport(prop, t, True)
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as ex:
            results = list(ex.map(lambda u: _run_unit(engine, gadget, prop, u), units))
    else:
        results = [_run_unit(engine, gadget, prop, u) for u in units]
    for r in results:
        report.patterns += r["patterns"]
        report.rejected += r["rejected"]
        if r["fail"] is not None and report.counterexample is None:
            report.verdict = False
            report.counterexample = r["fail"]
    report.evaluated = report.patterns - report.rejected
    return report


def replay_counterexample(gadget, report):
    """Re-run a reported counterexample; True if it still violates the property."""
    ce = report.counterexample if isinstance(report, GadgetCheckReport) else report["counterexample"]
    prop = _normalize(report.property if isinstance(report, GadgetCheckReport) else report["property"])
    fp = FaultPattern.from_json(ce["faults"])
    ins = {b: (PauliOperator.from_string(s).x[None, :], PauliOperator.from_string(s).z[None, :])
           for b, s in ce["inputs"].items()}
    from .circuit import pauli_code_of
    engine = FrameEngine(gadget)
    faults = ([0] * len(fp), [l for l, _ in fp.faults], [pauli_code_of(p) for _, p in fp.faults])
    res = engine.run(1, faults if len(fp) else None, ins or None)
    return bool((_evaluate(gadget, prop, res, ins, ce["s"]) & ~res.rejected)[0])


# ---------------------------------------------------------------- Steane support claim

def _state_group(code, state):
    from .gadgets import extended_code
    ext = extended_code(code, state)
    a = ext.a
    combos = ((np.arange(1 << a)[:, None] >> np.arange(a)) & 1).astype(np.int64)
    return (combos @ ext.gx) & 1, (combos @ ext.gz) & 1


def _min_rep_support(x, z, gx, gz):
    """Support of the minimum-weight element of each coset (batch), ties by first group element."""
    xs = x[:, None, :] ^ gx[None].astype(np.uint8)
    zs = z[:, None, :] ^ gz[None].astype(np.uint8)
    sup = (xs | zs).astype(bool)
    best = sup.sum(axis=2).argmin(axis=1)
    return sup[np.arange(x.shape[0]), best]


def steane_support_check(gadget):
    """Single faults in Steane EC leave a residual whose syndrome is reachable on the
    OR of the fault positions (ancilla residual supports, coupling gates, flipped
    readouts, idle data).  Returns (holds, patterns checked, counterexample)."""
    code = gadget.meta["code"]
    if gadget.meta.get("ec") != "steane":
        raise UnsupportedError("support check applies to Steane EC circuits")
    n = code.n
    data = gadget.blocks["in"]
    bm = gadget.block_map
    fac_state = {"ec/anc0": "0", "ec/anc+": "+"}
    groups = {f: _state_group(code, st) for f, st in fac_state.items()}
    # syndromes reachable with support inside each position mask
    colx = code.syndromes(np.eye(n, dtype=np.uint8), np.zeros((n, n), np.uint8))
    colz = code.syndromes(np.zeros((n, n), np.uint8), np.eye(n, dtype=np.uint8))
    idx = 1 << np.arange(code.a)
    reach = np.zeros((1 << n, 1 << code.a), bool)
    for mask in range(1 << n):
        span = {0}
        for j in range(n):
            if (mask >> j) & 1:
                for col in (int(colx[j] @ idx), int(colz[j] @ idx)):
                    span |= {v ^ col for v in span}
        reach[mask, list(span)] = True
    rx, rz = syndrome_representatives(code)
    ni = rx.shape[0]
    engine = FrameEngine(gadget)
    checked = 0
    for L, C in iter_patterns(gadget, 1, max(1, (1 << 15) // ni)):
        P = L.shape[0]
        B = P * ni
        cols = np.arange(B)
        fl = np.repeat(L[:, 0], ni)
        fc = np.repeat(C[:, 0], ni)
        res = engine.run(B, (cols, fl, fc), {"in": (np.tile(rx, (P, 1)), np.tile(rz, (P, 1)))})
        orv = np.zeros((B, n), bool)
        for f, (gx, gz) in groups.items():
            cx, cz = res.checkpoints[f]
            orv |= _min_rep_support(cx, cz, gx, gz)
        for p in range(P):
            loc = gadget.locations[int(L[p, 0])]
            if loc.group != "ec":
                continue
            code_p = int(C[p, 0])
            if loc.kind == MEAS:
                flips = (code_p >> 1) & 1 if loc.op == "X" else code_p & 1
                if not flips:
                    continue
            for q in loc.qubits:
                orv[p * ni:(p + 1) * ni, bm[q][1]] = True
        ox, oz = res.block(data)
        syn = code.syndrome_index(code.syndromes(ox, oz))
        mask = orv.astype(np.int64) @ (1 << np.arange(n))
        ok = reach[mask, syn] | res.rejected
        checked += int((~res.rejected).sum())
        if not ok.all():
            j = int(np.nonzero(~ok)[0][0])
            p, i = divmod(j, ni)
            fpat = pattern_of(gadget, L[p], C[p])
            return False, checked, {"faults": fpat.to_json(),
                                    "inputs": {"in": PauliOperator(rx[i], rz[i]).letters()}}
    return True, checked, None
