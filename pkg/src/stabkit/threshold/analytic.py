"""Level-reduction recursion, concatenation levels and overhead."""
from __future__ import annotations

from fractions import Fraction

import mpmath

from ..errors import ThresholdExceededError

mpmath.mp.dps = 60
SNAP = mpmath.mpf("1e-30")


def _exact(v):
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    return Fraction(str(v))


def threshold_from_A(A, t=1):
    """p_T = A^(-1/t); exact when t = 1."""
    if A < 1 or t < 1:
        raise ValueError("need A >= 1 and t >= 1")
    if t == 1:
        return 1 / _exact(A)
    return mpmath.power(mpmath.mpf(_exact(A).numerator) / _exact(A).denominator, -mpmath.mpf(1) / t)


def level_reduction_bound(p, A, t=1, levels=1):
    """Exact sequence p^(0..L) of p^(j) = A (p^(j-1))^(t+1); returns (sequence, p_T)."""
    if p < 0 or A < 1 or t < 1 or levels < 0:
        raise ValueError("need p >= 0, A >= 1, t >= 1, levels >= 0")
    a = _exact(A)
    seq = [_exact(p)]
    for _ in range(levels):
        seq.append(a * seq[-1] ** (t + 1))
    return seq, threshold_from_A(A, t)


def _mp(v):
    if isinstance(v, Fraction):
        return mpmath.mpf(v.numerator) / v.denominator
    return mpmath.mpf(str(v)) if isinstance(v, float) else mpmath.mpf(v)


def levels_needed(epsilon1, p, p_T, t=1):
    """Smallest L with (p/p_T)^((t+1)^L) p_T <= epsilon1."""
    p, pt, eps = _mp(p), _mp(p_T), _mp(epsilon1)
    if p >= pt:
        raise ThresholdExceededError(f"p = {mpmath.nstr(p, 6)} is not below p_T = {mpmath.nstr(pt, 6)}")
    if not (p > 0 and 0 < eps < pt):
        raise ValueError("need 0 < p < p_T and 0 < epsilon1 < p_T")
    ratio = mpmath.log(eps / pt) / mpmath.log(p / pt)
    if ratio <= 1:
        return 0
    x = mpmath.log(ratio) / mpmath.log(t + 1)
    r = mpmath.nint(x)
    if abs(x - r) < SNAP * max(1, abs(x)) or abs(x - r) < mpmath.mpf("1e-12"):
        return int(r)
    return int(mpmath.ceil(x))


def overhead_bound(G, L, t=1):
    """Gate overhead G^L of L levels of concatenation (exact integer)."""
    if G < 1 or L < 0:
        raise ValueError("need G >= 1 and L >= 0")
    return int(G) ** int(L)


def overhead_estimate(G, epsilon1, p, p_T, t=1):
    """Continuous form G * (log(eps/p_T) / log(p/p_T)) ** (log G / log(t+1))."""
    p, pt, eps = _mp(p), _mp(p_T), _mp(epsilon1)
    ratio = mpmath.log(eps / pt) / mpmath.log(p / pt)
    return G * ratio ** (mpmath.log(G) / mpmath.log(t + 1))
