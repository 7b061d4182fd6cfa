"""Diagnostics on Monte Carlo failure-rate curves."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .montecarlo import simulate_exrec


def parse_grid(spec):
    """'1e-5:1e-1:log20' -> 20 log-spaced points; 'a:b:linN' -> linear; 'a,b,c' -> list."""
    if ":" not in spec:
        return [float(v) for v in spec.split(",") if v]
    lo, hi, kind = spec.split(":")
    lo, hi = float(lo), float(hi)
    if kind.startswith("log"):
        return list(np.logspace(math.log10(lo), math.log10(hi), int(kind[3:])))
    if kind.startswith("lin"):
        return list(np.linspace(lo, hi, int(kind[3:])))
    raise ValueError(f"bad grid spec {spec!r}")


@dataclass
class QuadraticFit:
    c: float
    r2: float
    slope: float          # free log-log slope, for reference
    points: int


def fit_quadratic(ps, failures, trials, p_max=1e-3):
    """Weighted least squares of log(rate) = log c + 2 log p for p <= p_max.

    Weights are the failure counts (inverse variance of log rate); points
    without failures carry no information and are skipped.
    """
    ps = np.asarray(ps, float)
    k = np.asarray(failures, float)
    n = np.asarray(trials, float)
    sel = (ps <= p_max * (1 + 1e-9)) & (k > 0)
    if sel.sum() < 2:
        raise ValueError("need at least two points with failures to fit")
    x = np.log(ps[sel])
    y = np.log(k[sel] / n[sel])
    w = k[sel]
    logc = np.sum(w * (y - 2 * x)) / w.sum()
    pred = logc + 2 * x
    ybar = np.sum(w * y) / w.sum()
    ss_res = np.sum(w * (y - pred) ** 2)
    ss_tot = np.sum(w * (y - ybar) ** 2)
    r2 = 1 - ss_res / ss_tot if ss_tot > 0 else 1.0
    slope = np.polyfit(x, y, 1, w=np.sqrt(w))[0]
    return QuadraticFit(float(np.exp(logc)), float(r2), float(slope), int(sel.sum()))


def is_monotone(reports):
    """No statistically significant decrease between consecutive grid points."""
    for a, b in zip(reports, reports[1:]):
        if b.wilson_95_interval[1] < a.wilson_95_interval[0]:
            return False
    return True


def crossing(reports):
    """Bracket (p_below, p_above) where the rate crosses the diagonal, both CI-separated, or None."""
    below = [r for r in reports if r.wilson_95_interval[1] < r.p]
    above = [r for r in reports if r.wilson_95_interval[0] > r.p]
    if not below or not above:
        return None
    lo = max(r.p for r in below)
    hi = min((r.p for r in above if r.p > lo), default=None)
    return None if hi is None else (lo, hi)


@dataclass
class PseudoThreshold:
    estimate: float | None
    lo: float
    hi: float
    conclusive: bool
    evaluations: list = field(default_factory=list)

    def to_dict(self):
        return {"estimate": self.estimate, "lo": self.lo, "hi": self.hi, "conclusive": self.conclusive,
                "evaluations": [r.to_dict() for r in self.evaluations]}


def pseudo_threshold(exrec, noise_family, seed, lo=1e-5, hi=1e-1, trials=10 ** 5, max_iter=12,
                     ratio=1.1, jobs=1):
    """Bisection (in log p) on the sign of rate(p) - p; a side is only taken when the
    Wilson interval excludes p.  Returns the final bracket; inconclusive when an
    end point cannot be separated."""
    evals = []

    def side(p, k):
        r = simulate_exrec(exrec, noise_family(p), trials, seed + k, jobs)
        evals.append(r)
        lo_ci, hi_ci = r.wilson_95_interval
        return -1 if hi_ci < p else (1 if lo_ci > p else 0)

    if side(lo, 0) != -1 or side(hi, 1) != 1:
        return PseudoThreshold(None, lo, hi, False, evals)
    for k in range(max_iter):
        if hi / lo <= ratio:
            break
        mid = math.sqrt(lo * hi)
        s = side(mid, k + 2)
        if s == 0:
            break
        if s < 0:
            lo = mid
        else:
            hi = mid
    return PseudoThreshold(math.sqrt(lo * hi), lo, hi, True, evals)
