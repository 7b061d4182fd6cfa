"""Monte Carlo estimation of logical failure rates with Pauli frames."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from ..ft.circuit import Circuit, Postselect
from ..ft.frame import FrameEngine
from ..ft.properties import exrec_failures, decode_blocks
from .noise import NoiseModel, sample_fault_sites

Z95 = 1.959963984540054
CHUNK = 1 << 16
MAX_ATTEMPTS = 100


def wilson_interval(k, n, z=Z95):
    if n == 0:
        return 0.0, 1.0
    ph = k / n
    den = 1 + z * z / n
    mid = (ph + z * z / (2 * n)) / den
    half = z * math.sqrt(ph * (1 - ph) / n + z * z / (4 * n * n)) / den
    lo = 0.0 if k == 0 else max(0.0, mid - half)
    hi = 1.0 if k == n else min(1.0, mid + half)
    return lo, hi


@dataclass
class MonteCarloReport:
    trials: int
    failures: int
    seed: int
    p: float = float("nan")
    aborted: int = 0
    retries: int = 0

    @property
    def failure_rate(self):
        return self.failures / self.trials if self.trials else 0.0

    @property
    def wilson_95_interval(self):
        return wilson_interval(self.failures, self.trials)

    def to_dict(self):
        lo, hi = self.wilson_95_interval
        return {"p": self.p, "trials": self.trials, "failures": self.failures,
                "rate": self.failure_rate, "ci_lo": lo, "ci_hi": hi, "seed": self.seed,
                "aborted": self.aborted, "retries": self.retries}


def _sub_circuit(circuit, loc_ids, classical):
    keep = set(int(i) for i in loc_ids)
    locs = [l for l in circuit.locations if l.id in keep]
    return replace(circuit, locations=locs, classical=list(classical))


class Sampler:
    """Fault sampling with factory retries for one circuit and noise model.

    Every Postselect step names a factory; its locations are those whose
    group starts with that name.  A trial whose factory rejects gets fresh
    faults on that factory's locations until it is accepted, at most
    ``max_attempts`` times, after which the trial is aborted.
    """

    def __init__(self, circuit, noise, max_attempts=MAX_ATTEMPTS):
        self.circuit = circuit
        self.noise = noise
        self.max_attempts = max_attempts
        self.engine = FrameEngine(circuit)
        self.rates = noise.rates(circuit)
        self.nq = np.array([len(l.qubits) for l in circuit.locations])
        n = len(circuit.locations)
        self.factory_of = np.full(n, -1, np.int64)
        self.factories = []
        posts = [c for c in circuit.classical if isinstance(c, Postselect)]
        by_name = {}
        for c in posts:
            by_name.setdefault(c.factory, []).append(c)
        for name, cs in by_name.items():
            ids = np.array([l.id for l in circuit.locations_in(name)], np.int64)
            if np.any(self.factory_of[ids] >= 0):
                raise ValueError(f"factory {name} overlaps another factory")
            self.factory_of[ids] = len(self.factories)
            sub = _sub_circuit(circuit, ids, cs)
            self.factories.append((name, ids, FrameEngine(sub)))

    def _codes(self, locs, rng):
        codes = self.noise.sample_codes(self.nq[locs], rng)
        if self.noise.adversary is not None:
            codes = np.asarray(self.noise.adversary(locs, codes, rng), np.int64)
        return codes

    def sample(self, batch, rng):
        """Returns (trial, location, code) arrays of accepted faults and an abort mask."""
        tr, lc = sample_fault_sites(self.rates, batch, rng)
        cd = self._codes(lc, rng)
        aborted = np.zeros(batch, bool)
        retries = 0
        for f, (name, ids, eng) in enumerate(self.factories):
            sel = self.factory_of[lc] == f
            attempt = np.zeros(batch, np.int64)
            pend_tr, pend_lc, pend_cd = tr[sel], lc[sel], cd[sel]
            keep = ~sel
            tr, lc, cd = tr[keep], lc[keep], cd[keep]
            accepted = []
            frate = self.rates[ids]
            while pend_tr.size:
                live = np.unique(pend_tr)
                idx = np.searchsorted(live, pend_tr)
                res = eng.run(live.size, (idx, pend_lc, pend_cd))
                bad = res.rejected
                ok = ~np.isin(pend_tr, live[bad])
                accepted.append((pend_tr[ok], pend_lc[ok], pend_cd[ok]))
                redo = live[bad]
                attempt[redo] += 1
                give_up = redo[attempt[redo] >= self.max_attempts]
                aborted[give_up] = True
                redo = redo[attempt[redo] < self.max_attempts]
                retries += redo.size
                if not redo.size:
                    break
                t2, l2 = sample_fault_sites(frate, redo.size, rng)
                pend_tr, pend_lc = redo[t2], ids[l2]
                pend_cd = self._codes(pend_lc, rng)
            for a in accepted:
                tr = np.concatenate([tr, a[0]])
                lc = np.concatenate([lc, a[1]])
                cd = np.concatenate([cd, a[2]])
        order = np.argsort(tr, kind="stable")
        return tr[order], lc[order], cd[order], aborted, retries


def _chunk_sizes(trials, chunk):
    sizes = [chunk] * (trials // chunk)
    if trials % chunk:
        sizes.append(trials % chunk)
    return sizes


def run_monte_carlo(circuit, noise, trials, seed, fail_fn, jobs=1, chunk=CHUNK, max_attempts=MAX_ATTEMPTS):
    """Generic driver: ``fail_fn(FrameResult)`` flags failed trials among faulty ones."""
    sampler = Sampler(circuit, noise, max_attempts)
    sizes = _chunk_sizes(int(trials), chunk)
    seqs = np.random.SeedSequence(seed).spawn(len(sizes))

    def work(arg):
        size, ss = arg
        rng = np.random.default_rng(ss)
        tr, lc, cd, aborted, retries = sampler.sample(size, rng)
        faulty = np.unique(tr)
        fails = int(aborted.sum())
        run = faulty[~aborted[faulty]]
        if run.size:
            sel = ~aborted[tr]
            idx = np.searchsorted(run, tr[sel])
            res = sampler.engine.run(run.size, (idx, lc[sel], cd[sel]))
            if res.rejected.any():
                raise RuntimeError("accepted factory faults were rejected in the full circuit")
            fails += int(fail_fn(res).sum())
        return fails, int(aborted.sum()), retries

    if jobs > 1:
        with ThreadPoolExecutor(jobs) as ex:
            parts = list(ex.map(work, zip(sizes, seqs)))
    else:
        parts = [work(a) for a in zip(sizes, seqs)]
    rep = MonteCarloReport(int(trials), sum(p[0] for p in parts), int(seed))
    rep.aborted = sum(p[1] for p in parts)
    rep.retries = sum(p[2] for p in parts)
    if not isinstance(noise.p, dict):
        rep.p = float(noise.p)
    return rep


def simulate_exrec(exrec, noise, trials, seed, jobs=1, chunk=CHUNK):
    """Logical failure rate of a gate ExRec circuit (see ``exrec_failures``)."""
    return run_monte_carlo(exrec, noise, trials, seed, lambda res: exrec_failures(exrec, res), jobs, chunk)


def protocol_failures(protocol, res):
    """Trials whose logical frame changes the distribution of readouts and outputs.

    The frame is X on each logical readout that flipped plus the decoded
    logical Pauli on each unmeasured output; it is harmless when it commutes
    with all the checks from ``logical_checks``.
    """
    enc = protocol.encoded
    T = res.x.shape[1]
    ex, ez = [], []
    names, bx, bz = protocol.checks
    for name in names:
        ex.append(np.asarray(res.readouts[name]).reshape(T, -1)[:, :1] % 2)
        ez.append(np.zeros((T, 1), np.uint8))
    for ax, az in decode_blocks(protocol.code, res, enc.outputs, enc):
        ex.append(ax[:, :1])
        ez.append(az[:, :1])
    if not ex:
        return np.zeros(T, bool)
    ex = np.hstack(ex).astype(np.int64)
    ez = np.hstack(ez).astype(np.int64)
    return ((ex @ bz.T.astype(np.int64) + ez @ bx.T.astype(np.int64)) % 2).any(axis=1)


def simulate_protocol(protocol, noise, seed, trials, jobs=1, chunk=CHUNK):
    enc = protocol.encoded
    return run_monte_carlo(enc, noise, trials, seed, lambda res: protocol_failures(protocol, res), jobs, chunk)


def sample_trials(circuit, noise, trials, seed):
    """Accepted fault sets per trial (for diagnostics); returns list of (locs, codes) and aborts."""
    sampler = Sampler(circuit, noise)
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    tr, lc, cd, aborted, _ = sampler.sample(trials, rng)
    out = [([], []) for _ in range(trials)]
    for a, l, c in zip(tr, lc, cd):
        out[a][0].append(int(l))
        out[a][1].append(int(c))
    return out, aborted
