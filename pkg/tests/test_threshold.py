import math
from fractions import Fraction

import numpy as np
import pytest

from stabkit.codes import get_code
from stabkit.errors import ResourceLimitError, ThresholdExceededError
from stabkit.ft import CircuitBuilder, cnot_exrec
from stabkit.ft.frame import FrameEngine
from stabkit.threshold import (NoiseModel, build_protocol, classify_exrecs, sample_protocol_circuit,
                               simulate_protocol, simulate_exrec, wilson_interval, MonteCarloReport,
                               count_fault_sets, max_fault_sets, malignant_count, single_fault_failures,
                               level_reduction_bound, levels_needed, overhead_bound, overhead_estimate,
                               threshold_from_A, fit_quadratic, is_monotone, crossing, parse_grid)
from stabkit.threshold.montecarlo import Sampler, sample_trials, protocol_failures
from stabkit.threshold.noise import sample_fault_sites

SEVEN = get_code("seven_qubit")


@pytest.fixture(scope="module")
def protocol():
    return build_protocol(sample_protocol_circuit(), SEVEN)


@pytest.fixture(scope="module")
def exrec():
    return cnot_exrec(SEVEN)


def groups_of(protocol):
    return protocol.group_locations()


# ---------------------------------------------------------------- protocol structure

def test_prep_then_measure_shares_one_ec():
    b = CircuitBuilder()
    b.block("q", 1, is_input=False)
    b.prep(0, 0, "0", "c")
    b.measure(1, 0, "Z", "c")
    proto = build_protocol(b.finalize((), {"kind": "original"}), SEVEN)
    assert len(proto.exrecs) == 2
    prep, meas = sorted(proto.exrecs, key=lambda e: e.index)
    assert prep.trail == meas.lead and len(prep.trail) == 1
    assert prep.lead == () and meas.trail == ()


def test_sample_protocol_exrecs(protocol):
    kinds = [e.kind for e in sorted(protocol.exrecs, key=lambda e: e.index)]
    assert kinds == ["prep", "prep", "gate", "gate", "meas", "meas"]
    cnot = [e for e in protocol.exrecs if e.op == "CNOT"][0]
    assert len(cnot.lead) == 2 and len(cnot.trail) == 2
    g = groups_of(protocol)
    for e in protocol.exrecs:
        for name in e.groups:
            assert name in g


def test_no_faults_all_good_and_full(protocol):
    st = classify_exrecs(protocol, [])
    assert all(v == (True, False) for v in st.values())


def _exrec(protocol, op):
    return [e for e in protocol.exrecs if e.op == op][0]


def test_two_faults_in_gadget_truncate_predecessor(protocol):
    g = groups_of(protocol)
    h = _exrec(protocol, "H")
    faults = g[h.gadget][:2]
    st = classify_exrecs(protocol, faults)
    assert st[h.index] == (False, False)
    cnot = _exrec(protocol, "CNOT")
    # the CNOT ExRec loses the trailing EC it shares with the bad H ExRec
    assert st[cnot.index] == (True, True)
    # one fault is tolerated
    st1 = classify_exrecs(protocol, faults[:1])
    assert all(v[0] for v in st1.values())


def test_faults_split_between_lead_and_trail(protocol):
    g = groups_of(protocol)
    cnot = _exrec(protocol, "CNOT")
    faults = [g[cnot.lead[0]][0], g[cnot.trail[0]][0]]
    st = classify_exrecs(protocol, faults)
    assert st[cnot.index] == (False, False)
    preps = [e for e in protocol.exrecs if e.kind == "prep"]
    for p in preps:
        assert st[p.index][1]          # both preparation ExRecs lose their trailing ECs
        assert st[p.index][0]
    # the later ExRec that leads with the faulty trailing EC sees a single fault
    nxt = [e for e in protocol.exrecs if cnot.trail[0] in e.lead][0]
    assert st[nxt.index][0]


def _bell(measure=True):
    b = CircuitBuilder()
    b.block("q", 2, is_input=False)
    b.prep(0, 0, "+", "c")
    b.prep(0, 1, "0", "c")
    b.gate(1, "CNOT", (0, 1), "c")
    if measure:
        b.measure(2, 0, "Z", "c")
        b.measure(2, 1, "Z", "c")
    else:
        b.gate(2, "H", (0,), "c")
    return b.finalize((), {"kind": "original"})


def test_logical_checks_bell_readouts():
    names, bx, bz = build_protocol(_bell(), SEVEN).checks
    assert len(names) == 2 and not bx.any()
    # only the parity of the two outcomes is deterministic
    assert bz.tolist() == [[1, 1]]


def test_logical_checks_unmeasured_outputs():
    names, bx, bz = build_protocol(_bell(False), SEVEN).checks
    assert names == ()
    # columns (out0, out1); the state (H x I) Bell has stabilizers XZ and ZX
    frames = {"IX": (0, 1, 0, 0), "ZX": (0, 1, 1, 0), "XZ": (1, 0, 0, 1), "XI": (1, 0, 0, 0)}
    harmless = {}
    for k, (x0, x1, z0, z1) in frames.items():
        ex, ez = np.array([x0, x1]), np.array([z0, z1])
        harmless[k] = not ((ex @ bz.T + ez @ bx.T) % 2).any()
    assert harmless == {"IX": False, "ZX": True, "XZ": True, "XI": False}


# ---------------------------------------------------------------- noise and sampling

def test_noise_model_validation_and_rates(exrec):
    with pytest.raises(ValueError):
        NoiseModel.depolarizing(1.5)
    with pytest.raises(ValueError):
        NoiseModel("burst", 0.1)
    nm = NoiseModel.depolarizing(1e-3)
    assert np.all(nm.rates(exrec) == 1e-3)
    assert np.allclose(nm.pauli_probs(2), 1 / 15)
    kinds = {l.kind for l in exrec.locations}
    nk = NoiseModel("uncorrelated_pauli", {k: 0.0 for k in kinds} | {"WAIT": 0.5})
    assert set(np.unique(nk.rates(exrec))) <= {0.0, 0.5}


def test_fault_site_counts_match_binomial():
    rng = np.random.default_rng(1)
    rates = np.array([1e-3] * 500 + [0.05] * 100)
    batch = 4000
    tr, lc = sample_fault_sites(rates, batch, rng)
    expected = batch * rates.sum()
    sd = math.sqrt(batch * np.sum(rates * (1 - rates)))
    assert abs(tr.size - expected) < 5 * sd
    assert np.all(np.diff(tr) >= 0)
    pairs = set(zip(tr.tolist(), lc.tolist()))
    assert len(pairs) == tr.size


def test_pauli_codes_uniform():
    rng = np.random.default_rng(2)
    nm = NoiseModel.depolarizing(0.1)
    c1 = nm.sample_codes(np.ones(30000, int), rng)
    c2 = nm.sample_codes(np.full(30000, 2), rng)
    assert set(np.unique(c1)) == {1, 2, 3} and set(np.unique(c2)) == set(range(1, 16))
    assert np.allclose(np.bincount(c1)[1:] / 30000, 1 / 3, atol=0.02)


def test_zero_noise_never_fails(protocol, exrec):
    rep = simulate_protocol(protocol, NoiseModel.depolarizing(0.0), seed=3, trials=1000)
    assert rep.failures == 0 and rep.aborted == 0
    assert simulate_exrec(exrec, NoiseModel.depolarizing(0.0), 500, 1).failures == 0


def test_all_good_trials_succeed(protocol):
    """Trials where every ExRec is good must not fail (sampled, classified, replayed)."""
    enc = protocol.encoded
    noise = NoiseModel.depolarizing(3e-3)
    trials, aborted = sample_trials(enc, noise, 3000, seed=5)
    faulty = [i for i, (l, _) in enumerate(trials) if l and not aborted[i]]
    idx, lc, cd = [], [], []
    for j, i in enumerate(faulty):
        idx += [j] * len(trials[i][0])
        lc += trials[i][0]
        cd += trials[i][1]
    res = FrameEngine(enc).run(len(faulty), (np.array(idx), np.array(lc), np.array(cd)))
    fail = protocol_failures(protocol, res)
    good_trials = 0
    for j, i in enumerate(faulty):
        st = classify_exrecs(protocol, trials[i][0])
        if all(v[0] for v in st.values()):
            good_trials += 1
            assert not fail[j], f"trial {i} failed with all ExRecs good"
    assert good_trials > 100 and fail.any()


def test_factory_retries_and_aborts(exrec):
    s = Sampler(exrec, NoiseModel.depolarizing(0.02))
    tr, lc, cd, aborted, retries = s.sample(300, np.random.default_rng(0))
    assert retries > 0 and not aborted.any()
    s = Sampler(exrec, NoiseModel.depolarizing(0.3), max_attempts=2)
    *_, aborted, _ = s.sample(50, np.random.default_rng(0))
    assert aborted.any()
    rep = simulate_exrec(exrec, NoiseModel.depolarizing(0.3), 200, 0)
    assert rep.failures >= rep.aborted


def test_monte_carlo_deterministic_across_jobs(exrec):
    nm = NoiseModel.depolarizing(2e-3)
    a = simulate_exrec(exrec, nm, 5000, 42, jobs=1, chunk=1024)
    b = simulate_exrec(exrec, nm, 5000, 42, jobs=4, chunk=1024)
    assert a.to_dict() == b.to_dict()
    c = simulate_exrec(exrec, nm, 5000, 43, jobs=1, chunk=1024)
    assert (c.failures, c.retries) != (a.failures, a.retries)


def test_wilson_interval():
    lo, hi = wilson_interval(0, 100)
    assert lo == 0 and hi == pytest.approx(0.0370, abs=1e-4)
    lo, hi = wilson_interval(50, 100)
    assert (lo, hi) == pytest.approx((0.4038, 0.5962), abs=1e-4)
    assert wilson_interval(0, 0) == (0.0, 1.0)
    r = MonteCarloReport(1000, 10, 1, p=0.01)
    assert r.failure_rate == 0.01
    assert set(r.to_dict()) >= {"p", "trials", "failures", "rate", "ci_lo", "ci_hi"}


# ---------------------------------------------------------------- counting

def test_count_fault_sets():
    assert count_fault_sets(10, 1) == 45
    assert count_fault_sets(10, 2) == 120
    assert max_fault_sets([5, 12, 7]) == 66


def test_exrec_size_and_A(exrec):
    assert count_fault_sets(exrec) == 651 * 650 // 2


def test_single_faults_never_fail(exrec):
    total, acc, bad, first = single_fault_failures(exrec)
    assert total == 5109 and acc == 2725
    assert bad == 0 and first is None


def test_malignant_cap(exrec):
    with pytest.raises(ResourceLimitError):
        malignant_count(exrec, cap=1000)


# ---------------------------------------------------------------- analytic

def test_fixed_point_at_threshold():
    seq, pt = level_reduction_bound(Fraction(1, 100), 100, 1, 5)
    assert pt == Fraction(1, 100) and all(v == pt for v in seq)


def test_half_threshold_sequence():
    seq, pt = level_reduction_bound(Fraction(1, 200), 100, 1, 3)
    assert [v / pt for v in seq] == [Fraction(1, 2), Fraction(1, 4), Fraction(1, 16), Fraction(1, 256)]


def test_above_threshold_grows():
    seq, _ = level_reduction_bound(0.02, 100, 1, 4)
    assert all(b >= a for a, b in zip(seq, seq[1:]))


def test_threshold_from_A():
    assert threshold_from_A(1000) == Fraction(1, 1000)
    assert float(threshold_from_A(100, t=2)) == pytest.approx(100 ** -0.5)
    with pytest.raises(ValueError):
        threshold_from_A(0.5)


def test_levels_needed_examples():
    # (1/2)^(2^L) 1e-2 <= 1e-2 / 4 holds first at L = 1
    assert levels_needed(Fraction(1, 400), Fraction(1, 200), Fraction(1, 100)) == 1
    assert levels_needed(1e-15, 1e-4, 1e-3) == 4
    with pytest.raises(ThresholdExceededError):
        levels_needed(1e-9, 1e-3, 1e-3)
    with pytest.raises(ThresholdExceededError):
        levels_needed(1e-9, 2e-3, 1e-3)


def test_levels_needed_random_draws():
    rng = np.random.default_rng(17)
    for _ in range(20):
        A = int(rng.integers(10, 10 ** 5))
        pt = threshold_from_A(A)
        p = Fraction(float(pt) * float(rng.uniform(0.01, 0.95))).limit_denominator(10 ** 12)
        eps = Fraction(float(pt) * 10 ** float(rng.uniform(-20, -1))).limit_denominator(10 ** 40)
        L = levels_needed(eps, p, pt)
        seq, _ = level_reduction_bound(p, A, 1, L)
        assert seq[-1] <= eps
        if L > 0:
            assert seq[-2] > eps


def test_overhead():
    assert overhead_bound(10, 0) == 1
    assert overhead_bound(10, 3) == 1000
    assert overhead_bound(100, 2) == 10 ** 4
    est = overhead_estimate(10, 1e-15, 1e-4, 1e-3)
    assert float(est) == pytest.approx(10 * (12 / 1) ** (math.log(10) / math.log(2)), rel=1e-9)


# ---------------------------------------------------------------- fit and curve diagnostics

def test_parse_grid():
    g = parse_grid("1e-5:1e-1:log20")
    assert len(g) == 20 and g[0] == pytest.approx(1e-5) and g[-1] == pytest.approx(1e-1)
    assert parse_grid("0.1:0.3:lin3") == pytest.approx([0.1, 0.2, 0.3])
    assert parse_grid("1e-3,2e-3") == [1e-3, 2e-3]
    with pytest.raises(ValueError):
        parse_grid("1:2:cube4")


def test_fit_recovers_quadratic():
    ps = np.logspace(-5, -3, 8)
    n = 10 ** 9
    k = np.round(500 * ps ** 2 * n)
    f = fit_quadratic(ps, k, [n] * 8)
    assert f.c == pytest.approx(500, rel=0.01) and f.r2 > 0.999
    assert f.slope == pytest.approx(2, abs=0.02)
    with pytest.raises(ValueError):
        fit_quadratic([1e-4], [3], [10])


def _reports(ps, rates, n=10 ** 6):
    return [MonteCarloReport(n, int(round(r * n)), 0, p=p) for p, r in zip(ps, rates)]


def test_monotone_and_crossing():
    ps = [1e-4, 1e-3, 1e-2, 1e-1]
    reps = _reports(ps, [1e-5, 1e-3 * 0.5, 0.05, 0.5])
    assert is_monotone(reps)
    assert crossing(reps) == (1e-3, 1e-2)
    assert not is_monotone(_reports(ps, [1e-5, 1e-2, 1e-3, 0.5]))
    assert crossing(_reports(ps, [1e-5, 1e-5, 1e-4, 1e-3])) is None
