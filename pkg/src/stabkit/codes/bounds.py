"""Counting bounds on quantum code parameters (exact integer arithmetic)."""
from dataclasses import dataclass
from math import comb, log2

from ..errors import DimensionError


@dataclass(frozen=True)
class BoundResult:
    holds: bool
    lhs: int
    rhs: int

    def __bool__(self):
        return self.holds


def _ball(n, r):
    return sum(3 ** j * comb(n, j) for j in range(r + 1))


def hamming_bound(n, k, t):
    """Nondegenerate packing: sum_{j<=t} 3^j C(n,j) * 2^k <= 2^n."""
    lhs = _ball(n, t) * 2 ** k
    return BoundResult(lhs <= 2 ** n, lhs, 2 ** n)


def gv_bound(n, k, d):
    """Existence guarantee: sum_{j<=d-1} 3^j C(n,j) * 2^k <= 2^n."""
    lhs = _ball(n, d - 1) * 2 ** k
    return BoundResult(lhs <= 2 ** n, lhs, 2 ** n)


def singleton_bound(n, k, d):
    """n - k >= 2(d - 1)."""
    return BoundResult(n - k >= 2 * d - 2, n - k, 2 * d - 2)


def _h(x):
    if x <= 0 or x >= 1:
        return 0.0
    return -x * log2(x) - (1 - x) * log2(1 - x)


def asymptotic_rate_bounds(p):
    """(lower, upper) achievable rate for correcting a fraction p of errors."""
    if not 0 < p <= 0.25:
        raise DimensionError("error fraction must lie in (0, 1/4]")
    lower = 1 - 2 * p * log2(3) - _h(2 * p)
    upper = 1 - p * log2(3) - _h(p)
    return max(lower, 0.0), max(upper, 0.0)


def bounds_table(max_n=10, max_k=2):
    """Rows (n, k, d, hamming, gv, singleton) with t = floor((d-1)/2)."""
    rows = []
    for n in range(1, max_n + 1):
        for k in range(0, min(max_k, n) + 1):
            for d in range(1, n + 1):
                t = (d - 1) // 2
                rows.append((n, k, d, bool(hamming_bound(n, k, t)),
                             bool(gv_bound(n, k, d)), bool(singleton_bound(n, k, d))))
    return rows
