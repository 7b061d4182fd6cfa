"""Stochastic Pauli noise on circuit locations."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

VARIANTS = ("depolarizing", "uncorrelated_pauli", "adversarial_stochastic")


@dataclass
class NoiseModel:
    """Each location fails independently with probability p (per location kind).

    ``distribution`` maps 1 or 2 (qubits per location) to probabilities of
    the non-identity Pauli codes; the default is uniform (depolarizing).
    An adversary receives (location ids, sampled codes, rng) after the
    failing locations are drawn and returns replacement codes; 0 switches
    a fault off.  It cannot move faults to other locations.
    """
    variant: str = "depolarizing"
    p: float | dict = 0.0
    distribution: dict = field(default_factory=dict)
    adversary: Callable | None = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown noise variant {self.variant!r}")
        for v in (self.p.values() if isinstance(self.p, dict) else [self.p]):
            if not 0 <= v <= 1:
                raise ValueError("fault probabilities must lie in [0, 1]")

    @classmethod
    def depolarizing(cls, p):
        return cls("depolarizing", float(p))

    def rates(self, circuit):
        if isinstance(self.p, dict):
            return np.array([self.p.get(l.kind, 0.0) for l in circuit.locations], float)
        return np.full(len(circuit.locations), float(self.p))

    def pauli_probs(self, nq):
        if self.variant == "depolarizing" or nq not in self.distribution:
            m = 15 if nq == 2 else 3
            return np.full(m, 1.0 / m)
        d = np.asarray(self.distribution[nq], float)
        return d / d.sum()

    def sample_codes(self, nqubits, rng):
        """Pauli codes for faults on locations with the given qubit counts."""
        nqubits = np.asarray(nqubits)
        codes = np.empty(nqubits.size, np.int64)
        for nq in (1, 2):
            sel = nqubits == nq
            k = int(sel.sum())
            if k:
                pr = self.pauli_probs(nq)
                codes[sel] = rng.choice(len(pr), size=k, p=pr) + 1
        return codes


def sample_fault_sites(rates, batch, rng, dense_above=0.02):
    """Independent Bernoulli faults; returns (trial, location) index arrays sorted by trial."""
    rates = np.asarray(rates, float)
    n = rates.size
    trials, locs = [], []
    for val in np.unique(rates):
        if val <= 0:
            continue
        cols = np.nonzero(rates == val)[0]
        if val >= dense_above:
            hit = rng.random((batch, cols.size)) < val
            tr, c = np.nonzero(hit)
        else:
            pop = batch * cols.size
            k = rng.binomial(pop, val)
            chosen = np.unique(rng.integers(0, pop, size=k))
            while chosen.size < k:
                more = rng.integers(0, pop, size=k - chosen.size)
                chosen = np.unique(np.concatenate([chosen, more]))
            tr, c = np.divmod(chosen, cols.size)
        trials.append(tr)
        locs.append(cols[c])
    if not trials:
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    tr = np.concatenate(trials).astype(np.int64)
    lc = np.concatenate(locs).astype(np.int64)
    order = np.lexsort((lc, tr))
    return tr[order], lc[order]
