"""Logical failure rate of the CNOT ExRec on a coarse grid (a few minutes)."""
import numpy as np

from stabkit.codes import get_code
from stabkit.ft import cnot_exrec
from stabkit.threshold import (NoiseModel, simulate_exrec, fit_quadratic, crossing, levels_needed,
                               level_reduction_bound)

exrec = cnot_exrec(get_code("seven_qubit"))
grid = np.logspace(-4, -2, 5)
reports = [simulate_exrec(exrec, NoiseModel.depolarizing(p), 20000, seed=i) for i, p in enumerate(grid)]
for r in reports:
    lo, hi = r.wilson_95_interval
    print(f"p={r.p:.2e}  rate={r.failure_rate:.3e}  [{lo:.2e}, {hi:.2e}]")

fit = fit_quadratic([r.p for r in reports], [r.failures for r in reports], [r.trials for r in reports], 1e-3)
print(f"rate ~ {fit.c:.0f} p^2  (R2 {fit.r2:.3f}, free slope {fit.slope:.2f})")
print("crossing bracket:", crossing(reports))   # None here: 2e4 trials cannot resolve rates below 1e-4

# concatenation with a made-up threshold
L = levels_needed(1e-15, 1e-4, 1e-3)
seq, pt = level_reduction_bound(1e-4, 1000, 1, L)
print(L, "levels:", [float(v) for v in seq])
