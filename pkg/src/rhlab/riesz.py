"""Riesz function and its numerical ties to the Baez-Duarte sequence."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import mpmath
from mpmath import mp, mpf

from .baez_duarte import LOG2_10, _table_scale_ints, ck, ck_range
from .errors import DomainError, PrecisionBudgetError
from .mp_kernel import check_precision, guard_digits, shared_zeta_table

try:
    from gmpy2 import mpz
except ImportError:  # pragma: no cover
    mpz = int

__all__ = [
    "BRIDGE_CONSTANT",
    "ApproxRelation",
    "BridgeReport",
    "approx_relation_check",
    "bridge_check",
    "riesz_R",
    "riesz_budget_digits",
    "series_identity_check",
    "series_identity_sides",
]

LOG10_E = 0.4343
# second-order constant standing in for the O(k^-2) term of the bridge bound
SECOND_ORDER_C = 1


def _bridge_constant():
    return 3 * mpmath.sqrt(mp.pi) / 16


BRIDGE_CONSTANT = float(_bridge_constant())


def riesz_budget_digits(x) -> int:
    return math.ceil(LOG10_E * float(x) + 20)


def _series_length(x: float, digits: int) -> int:
    """Smallest K past the peak with x^(K+1)/K! < 10^-digits."""
    if x == 0:
        return 0
    lx = math.log10(x)
    k = 0
    while True:
        log_term = (k + 1) * lx - math.lgamma(k + 1) / math.log(10)
        if k > x and log_term < -digits:
            return k
        k += 1


def riesz_R(x, precision: int = 30, *, working_precision: Optional[int] = None) -> mpf:
    """R(x) = sum_{k>=0} (-1)^k x^(k+1) / (k! zeta(2k+2)) for x >= 0."""
    check_precision(precision)
    x = mpmath.mpmathify(x)
    if x < 0:
        raise DomainError("riesz_R is evaluated for x >= 0 only")
    need = riesz_budget_digits(x)
    if working_precision is None:
        wd = math.ceil(LOG10_E * float(x)) + precision + guard_digits(precision)
    elif working_precision < need:
        raise PrecisionBudgetError(
            f"R({mpmath.nstr(x, 10)}) needs at least {need} working digits "
            f"(0.4343*x + 20 for terms peaking near e^x); got {working_precision}",
            minimum=need,
        )
    else:
        wd = working_precision
    if x == 0:
        return mpf(0)
    n_terms = _series_length(float(x), precision + 5)
    table = shared_zeta_table(n_terms + 1, wd)
    with mp.workdps(wd):
        xs = +x
        term = xs
        acc = mpf(0)
        for k in range(n_terms + 1):
            if k:
                term = term * xs / k
            t = term * table.inverse(k + 1)
            acc = acc - t if k % 2 else acc + t
        return acc


@dataclass(frozen=True)
class BridgeReport:
    k: int
    r_over_k: mpf
    c_k: mpf
    gap: mpf
    bound: mpf
    ratio: mpf
    precision: int

    @property
    def allowance(self):
        """Pass threshold: bound + C2 k^-2 with C2 = 1."""
        with mp.workdps(30):
            return self.bound + SECOND_ORDER_C * mpf(self.k) ** -2

    @property
    def passed(self) -> bool:
        return self.gap <= self.allowance


def bridge_check(k: int, precision: int = 30) -> BridgeReport:
    """Compare R(k)/k with c_k against 3 sqrt(pi)/16 k^-3/2 (+ k^-2)."""
    check_precision(precision)
    if isinstance(k, bool) or not isinstance(k, int) or k < 10:
        raise DomainError(f"bridge_check needs an integer k >= 10, got {k!r}")
    c = ck(k, precision)
    r = riesz_R(k, precision)
    wd = precision + guard_digits(precision)
    with mp.workdps(wd):
        r_over_k = r / k
        gap = abs(r_over_k - c)
        bound = _bridge_constant() * mpf(k) ** mpf(-1.5)
        ratio = gap / bound
    return BridgeReport(k, r_over_k, c, gap, bound, ratio, precision)


def series_identity_sides(x, K: int, precision: int = 30):
    """(sum_{k<=K} c_k x^k / k!, e^x R(x) / x), both to absolute 10^-precision."""
    check_precision(precision)
    x = mpmath.mpmathify(x)
    if x <= 0:
        raise DomainError("the generating identity is checked for x > 0")
    if K < 0:
        raise DomainError(f"K must be >= 0, got {K}")
    scale = math.ceil(LOG10_E * float(x)) + 1
    series = ck_range(0, K, 1, precision + scale)
    r = riesz_R(x, precision + scale)
    wd = precision + scale + guard_digits(precision)
    with mp.workdps(wd):
        term = mpf(1)
        terms = []
        for e in series:
            if e.k:
                term = term * x / e.k
            terms.append(e.value * term)
        lhs = mpmath.fsum(terms)
        rhs = mpmath.exp(x) * r / x
    return lhs, rhs


def series_identity_check(x, K: int, precision: int = 30, *, check_tail: bool = True) -> mpf:
    """|sum_{k<=K} c_k x^k/k! - e^x R(x)/x|.

    With ``check_tail`` the truncation must already be negligible:
    x^K/K! < 10^-(precision+5), using |c_k| <= 1.
    """
    x = mpmath.mpmathify(x)
    if check_tail and x > 0:
        log_tail = K * math.log10(float(x)) - math.lgamma(K + 1) / math.log(10)
        if log_tail >= -(precision + 5):
            raise DomainError(
                f"K={K} leaves a tail bound 10^{log_tail:.1f} above 10^-{precision + 5}; "
                "raise K or pass check_tail=False"
            )
    lhs, rhs = series_identity_sides(x, K, precision)
    with mp.workdps(precision + guard_digits(precision)):
        return abs(lhs - rhs)


@dataclass(frozen=True)
class ApproxRelation:
    k: int
    difference: mpf
    bridge_gap: mpf
    mismatch: mpf


def _exponential_sum_fixed(k: int, precision: int) -> mpf:
    """sum_j (-1)^j k^j / (j! zeta(2j+2)) in integer fixed point.

    Kept apart from :func:`riesz_R` so the two evaluations of the same
    number share no arithmetic.
    """
    wd = math.ceil(LOG10_E * k) + precision + guard_digits(precision)
    bits = math.ceil(wd * LOG2_10)
    n_terms = _series_length(float(k), wd) + 1
    table = shared_zeta_table(n_terms + 1, wd + 2)
    inv = _table_scale_ints(table, n_terms + 1, bits)
    power = mpz(1)
    fact = mpz(1)
    acc = mpz(0)
    for j in range(n_terms + 1):
        if j:
            power *= k
            fact *= j
        t = (power * inv[j] + fact // 2) // fact
        acc = acc - t if j % 2 else acc + t
    with mp.workprec(bits + 64):
        return mpf((int(acc), -bits))


def approx_relation_check(k: int, precision: int = 30) -> ApproxRelation:
    """D(k) = |sum_j (-1)^j k^j/(j! zeta(2j+2)) - c_k| and its agreement with
    the bridge gap |R(k)/k - c_k| (the same number reached another way)."""
    check_precision(precision)
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise DomainError(f"k must be a positive integer, got {k!r}")
    left = _exponential_sum_fixed(k, precision)
    c = ck(k, precision)
    r = riesz_R(k, precision)
    with mp.workdps(precision + guard_digits(precision)):
        d = abs(left - c)
        gap = abs(r / k - c)
        return ApproxRelation(k, d, gap, abs(d - gap))
