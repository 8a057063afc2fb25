"""The Baez-Duarte sequence c_k = sum_j (-1)^j C(k,j) / zeta(2j+2).

The alternating binomial transform cancels terms of size up to 2^k down to
a result near 1e-5 k^(-3/4), so each c_k is evaluated in exact integer
fixed point: binomials stay exact and only the table entries 1/zeta(2j+2)
are rounded, once, to the working scale.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import mpmath
from mpmath import mp, mpf

from .errors import DomainError, PrecisionBudgetError
from .mp_kernel import LOG10_2, ZetaEvenTable, check_precision, guard_digits, shared_zeta_table

try:  # exact big-integer products are several times faster through GMP
    from gmpy2 import mpz
except ImportError:  # pragma: no cover
    mpz = int

__all__ = [
    "ENVELOPE_A",
    "ENVELOPE_WINDOW",
    "CkEntry",
    "CkSeries",
    "DirectSum",
    "alternating_sum_closed",
    "alternating_sum_direct",
    "budget_digits",
    "ck",
    "ck_range",
]

ENVELOPE_A = mpf("0.777506e-5")
ENVELOPE_WINDOW = (2000, 20000)
LOG2_10 = math.log2(10)


def budget_digits(k: int) -> int:
    """Minimum working digits for c_k: binomial mass 2^k plus 20 guard digits."""
    return math.ceil(LOG10_2 * k + 20)


def default_working_digits(k: int, precision: int) -> int:
    return math.ceil(LOG10_2 * k) + precision + guard_digits(precision)


@dataclass(frozen=True)
class CkEntry:
    k: int
    value: mpf
    precision_used: int


@dataclass(frozen=True)
class CkSeries:
    entries: tuple
    precision: int
    window: tuple = ENVELOPE_WINDOW

    def __post_init__(self):
        ks = [e.k for e in self.entries]
        if any(b <= a for a, b in zip(ks, ks[1:])):
            raise DomainError("CkSeries indices must be strictly increasing")

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def ks(self):
        return [e.k for e in self.entries]

    @property
    def values(self):
        return [e.value for e in self.entries]

    def scaled(self):
        """(k, |c_k| k^(3/4)) for k >= 1."""
        with mp.workdps(30):
            return [(e.k, abs(e.value) * mpf(e.k) ** mpf(0.75)) for e in self.entries if e.k >= 1]

    @property
    def envelope_stat(self):
        """sup |c_k| k^(3/4) over entries inside ``window``; None if none fall there."""
        lo, hi = self.window
        vals = [v for k, v in self.scaled() if lo <= k <= hi]
        return max(vals) if vals else None

    @property
    def envelope_argmax(self):
        lo, hi = self.window
        best = max(((v, k) for k, v in self.scaled() if lo <= k <= hi), default=None)
        return None if best is None else best[1]


def _table_scale_ints(table: ZetaEvenTable, count: int, bits: int):
    """round(2^bits / zeta(2m)) for m = 1..count, exact from the stored mpf values."""
    out = []
    for m in range(1, count + 1):
        man, exp = table.inverse(m).man_exp
        shift = exp + bits
        if shift >= 0:
            out.append(mpz(man) << shift)
        else:
            out.append(((mpz(man) >> (-shift - 1)) + 1) >> 1)
    return out


def _terms_needed(k: int, bits: int) -> int:
    # 1 - 1/zeta(2j+2) < 2 * 4^-(j+1); those rows round to exactly 2^bits
    # once 4^-(j+1) < 2^-(bits+2)
    return min(k + 1, bits // 2 + 2)


def _ck_fixed(k: int, bits: int, table: ZetaEvenTable) -> mpf:
    one = mpz(1) << bits
    count = _terms_needed(k, bits)
    inv = _table_scale_ints(table, count, bits)
    if k == 0:
        acc = inv[0]
    else:
        # sum_j (-1)^j C(k,j) = 0, so only the defects 2^bits - round(2^bits/zeta)
        # contribute; they vanish identically beyond ``count``
        acc = mpz(0)
        binom = mpz(1)
        for j in range(count):
            d = one - inv[j]
            if j % 2:
                acc += binom * d
            else:
                acc -= binom * d
            binom = binom * (k - j) // (j + 1)
    with mp.workprec(bits + 64):
        return mpf((int(acc), -bits))


def _resolve_working(k, precision, working_precision):
    need = budget_digits(k)
    if working_precision is None:
        return default_working_digits(k, precision)
    if working_precision < need:
        raise PrecisionBudgetError(
            f"c_{k} needs at least {need} working digits "
            f"(0.30103*k + 20 cancellation budget); got {working_precision}",
            minimum=need,
        )
    return working_precision


def ck(k: int, precision: int = 30, *, working_precision: Optional[int] = None,
       table: Optional[ZetaEvenTable] = None) -> mpf:
    """c_k accurate to 10**-precision.

    ``working_precision`` overrides the digit count used internally; it must
    respect the cancellation budget or :class:`PrecisionBudgetError` is raised.
    """
    check_precision(precision)
    if isinstance(k, bool) or not isinstance(k, int) or k < 0:
        raise DomainError(f"k must be a non-negative integer, got {k!r}")
    wd = _resolve_working(k, precision, working_precision)
    bits = math.ceil(wd * LOG2_10)
    count = _terms_needed(k, bits)
    if table is None:
        table = shared_zeta_table(count + 1, wd + 2)
    elif not table.covers(count, wd):
        raise DomainError(f"table (count={table.count}, precision={table.precision}) too small "
                          f"for c_{k} at {wd} digits")
    return _ck_fixed(k, bits, table)


_POOL_TABLE: Optional[ZetaEvenTable] = None


def _pool_job(args):
    k, bits = args
    return _ck_fixed(k, bits, _POOL_TABLE)


def ck_range(k_min: int, k_max: int, stride: int = 1, precision: int = 30,
             precision_policy: Optional[Callable[[int], int]] = None,
             workers: int = 1, window=ENVELOPE_WINDOW) -> CkSeries:
    """c_k for k = k_min, k_min+stride, ..., <= k_max sharing one zeta table.

    ``precision_policy`` maps k to working digits (default: the cancellation
    budget plus ``precision`` plus guard).  Values are identical to
    :func:`ck` at the same working precision whatever ``workers`` is.
    """
    check_precision(precision)
    if not (isinstance(k_min, int) and isinstance(k_max, int)) or k_min < 0 or k_max < k_min:
        raise DomainError(f"need 0 <= k_min <= k_max, got {k_min}, {k_max}")
    if stride < 1:
        raise DomainError(f"stride must be >= 1, got {stride}")
    ks = list(range(k_min, k_max + 1, stride))
    if precision_policy is None:
        wds = [default_working_digits(k, precision) for k in ks]
    else:
        wds = [_resolve_working(k, precision, int(precision_policy(k))) for k in ks]
    bits = [math.ceil(w * LOG2_10) for w in wds]
    count = max(_terms_needed(k, b) for k, b in zip(ks, bits))
    table = shared_zeta_table(count + 1, max(wds) + 2)
    jobs = list(zip(ks, bits))
    if workers > 1 and len(jobs) > 1:
        global _POOL_TABLE
        _POOL_TABLE = table
        import multiprocessing
        ctx = multiprocessing.get_context("fork")
        with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
            values = list(pool.map(_pool_job, jobs, chunksize=max(1, len(jobs) // (8 * workers))))
        _POOL_TABLE = None
    else:
        values = [_ck_fixed(k, b, table) for k, b in jobs]
    entries = tuple(CkEntry(k, v, w) for k, v, w in zip(ks, values, wds))
    return CkSeries(entries, precision, tuple(window))


def alternating_sum_closed(precision: int = 30) -> mpf:
    """sum_{k>=1} 2^-k / zeta(2k), truncated once 2^-k < 10^-(precision+5)."""
    check_precision(precision)
    wd = precision + guard_digits(precision)
    n_terms = math.ceil((precision + 5) * LOG2_10)
    table = shared_zeta_table(n_terms, wd)
    with mp.workdps(wd):
        return mpmath.fsum(mpmath.ldexp(table.inverse(m), -m) for m in range(1, n_terms + 1))


@dataclass(frozen=True)
class DirectSum:
    value: mpf
    uncertainty: mpf
    N: int
    depth: int
    partial_sums: tuple = field(repr=False, default=())


def _neighbour_average(seq):
    return [(a + b) / 2 for a, b in zip(seq, seq[1:])]


def alternating_sum_direct(N: int, averaging_depth: int = 4, precision: int = 20,
                           window: int = 4) -> DirectSum:
    """sum_{k>=0} (-1)^k c_k from N+1 partial sums smoothed by repeated
    neighbour averaging; the uncertainty is the spread of the last ``window``
    smoothed values.
    """
    if N < 10:
        raise DomainError(f"N must be >= 10, got {N}")
    if averaging_depth < 0:
        raise DomainError(f"averaging depth must be >= 0, got {averaging_depth}")
    series = ck_range(0, N, 1, precision)
    with mp.workdps(precision + guard_digits(precision)):
        partial = []
        acc = mpf(0)
        for e in series:
            acc += e.value if e.k % 2 == 0 else -e.value
            partial.append(acc)
        smooth = partial
        for _ in range(averaging_depth):
            smooth = _neighbour_average(smooth)
        tail = smooth[-window:]
        spread = max(tail) - min(tail)
    return DirectSum(smooth[-1], spread, N, averaging_depth, tuple(partial))


