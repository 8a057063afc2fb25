"""Multiprecision scalar kernels.

Real and complex values are ``mpmath.mpf`` / ``mpmath.mpc``; exact rationals
are ``fractions.Fraction``.  Every public routine takes ``precision`` in
decimal digits, computes with :func:`guard_digits` extra digits and returns
the value at that working precision.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp, mpf, mpc

from .errors import ConditioningError, DomainError, PoleError, PrecisionBudgetError

__all__ = [
    "ZetaEvenTable",
    "bernoulli",
    "check_precision",
    "gamma_complex",
    "guard_digits",
    "shared_zeta_table",
    "zeta_continued",
    "zeta_dirichlet",
    "zeta_even_table",
    "zeta_maslanka",
]

LOG10_2 = 0.30103


def guard_digits(precision: int) -> int:
    return max(20, math.ceil(0.1 * precision))


def check_precision(precision) -> int:
    if isinstance(precision, bool) or not isinstance(precision, int):
        raise DomainError(f"precision must be an integer number of digits, got {precision!r}")
    if precision < 10:
        raise DomainError(f"precision must be >= 10 digits, got {precision}")
    return precision


def _is_real(x) -> bool:
    return not isinstance(x, mpc) or x.imag == 0


def _number(s):
    """Coerce ints, floats, strings, Fractions and complex to mpf/mpc."""
    if isinstance(s, Fraction):
        return mpf(s.numerator) / s.denominator
    return mpmath.mpmathify(s)


def _finite(x, what):
    if isinstance(x, mpc):
        ok = mpmath.isfinite(x.real) and mpmath.isfinite(x.imag)
    else:
        ok = mpmath.isfinite(x)
    if not ok:
        raise ConditioningError(f"{what} produced a non-finite value")
    return x


# --------------------------------------------------------------------------
# Bernoulli numbers

_bern_lock = threading.Lock()
_bern_even: list[Fraction] = [Fraction(1)]  # _bern_even[k] = B_{2k}


def _extend_bernoulli(kmax: int) -> None:
    # Tangent numbers T_1..T_n (integer recurrence), then
    # B_2k = (-1)^(k-1) 2k T_k / (4^k (4^k - 1)).
    n = kmax
    t = [0] * (n + 1)
    t[1] = 1
    for k in range(2, n + 1):
        t[k] = (k - 1) * t[k - 1]
    for k in range(2, n + 1):
        for j in range(k, n + 1):
            t[j] = (j - k) * t[j - 1] + (j - k + 2) * t[j]
    out = [Fraction(1)]
    for k in range(1, n + 1):
        four = 1 << (2 * k)
        b = Fraction(2 * k * t[k], four * (four - 1))
        out.append(b if k % 2 else -b)
    _bern_even[:] = out


def bernoulli(n: int) -> Fraction:
    """Exact Bernoulli number B_n for even ``n >= 0`` (convention B_1 = -1/2 unused).

    Odd indices are rejected: B_n vanishes there for n > 1 and asking for it
    usually means an off-by-one upstream.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise DomainError(f"bernoulli index must be a non-negative integer, got {n!r}")
    if n % 2:
        raise DomainError(f"bernoulli index must be even, got {n}")
    k = n // 2
    with _bern_lock:
        if k >= len(_bern_even):
            _extend_bernoulli(max(k, 2 * (len(_bern_even) - 1), 16))
        return _bern_even[k]


# --------------------------------------------------------------------------
# zeta at even integers

@dataclass(frozen=True)
class ZetaEvenTable:
    """zeta(2m) and 1/zeta(2m) for m = 1..count, accurate to 10**-precision."""

    precision: int
    zeta_values: tuple
    inverse_values: tuple

    def __post_init__(self):
        if len(self.zeta_values) != len(self.inverse_values):
            raise DomainError("zeta and inverse columns differ in length")

    @property
    def count(self) -> int:
        return len(self.zeta_values)

    def __len__(self):
        return len(self.zeta_values)

    def zeta(self, m: int):
        if not 1 <= m <= self.count:
            raise IndexError(f"m={m} outside table 1..{self.count}")
        return self.zeta_values[m - 1]

    def inverse(self, m: int):
        if not 1 <= m <= self.count:
            raise IndexError(f"m={m} outside table 1..{self.count}")
        return self.inverse_values[m - 1]

    def covers(self, count: int, precision: int) -> bool:
        return self.count >= count and self.precision >= precision

    @classmethod
    def from_zeta_values(cls, precision, values):
        """Rebuild a table from zeta(2m) alone; inverses are recomputed."""
        wd = precision + guard_digits(precision)
        with mp.workdps(wd):
            zs = tuple(mpf(v) for v in values)
            inv = tuple(1 / z for z in zs)
        return cls(precision, zs, inv)


def _zeta_even_direct(m: int, digits: int):
    # sum n^-2m until the tail integral N^(1-2m)/(2m-1) drops under 10^-digits
    s = 2 * m
    eps = mpf(10) ** (-digits)
    terms = [mpf(1)]
    n = 2
    while True:
        t = mpf(n) ** (-s)
        terms.append(t)
        if t * n / (s - 1) < eps:
            break
        n += 1
    return mpmath.fsum(terms)


def _bernoulli_cutoff(digits: int) -> int:
    # direct summation needs about 10^(digits/(2m-1)) terms; switch to the
    # closed form while that exceeds a few hundred
    return max(1, math.ceil(((digits + 5) / math.log10(400) + 1) / 2))


def zeta_even_table(count: int, precision: int) -> ZetaEvenTable:
    """Build zeta(2m) = (2 pi)^2m |B_2m| / (2 (2m)!) for m = 1..count."""
    check_precision(precision)
    if isinstance(count, bool) or not isinstance(count, int) or count < 1:
        raise DomainError(f"table size must be a positive integer, got {count!r}")
    wd = precision + guard_digits(precision)
    m0 = min(count, _bernoulli_cutoff(wd))
    if m0:
        bernoulli(2 * m0)
    zs = []
    with mp.workdps(wd + 10):
        two_pi_sq = (2 * mp.pi) ** 2
        power = mpf(1)
        fact = 1
        for m in range(1, m0 + 1):
            power *= two_pi_sq
            fact *= (2 * m - 1) * (2 * m)
            b = abs(bernoulli(2 * m))
            zs.append(power * b.numerator / (2 * fact * b.denominator))
        for m in range(m0 + 1, count + 1):
            zs.append(_zeta_even_direct(m, wd + 5))
    with mp.workdps(wd):
        zs = tuple(+z for z in zs)
        inv = tuple(1 / z for z in zs)
    return ZetaEvenTable(precision, zs, inv)


_table_lock = threading.Lock()
_shared_table: ZetaEvenTable | None = None


def shared_zeta_table(count: int, precision: int) -> ZetaEvenTable:
    """Process-wide table that only ever grows; callers read a prefix."""
    global _shared_table
    with _table_lock:
        t = _shared_table
        if t is None or not t.covers(count, precision):
            if t is not None:
                count = max(count, t.count)
                precision = max(precision, t.precision)
            _shared_table = t = zeta_even_table(count, precision)
        return t


def _reset_shared_table():
    global _shared_table
    with _table_lock:
        _shared_table = None


# --------------------------------------------------------------------------
# reference zeta evaluators

def zeta_dirichlet(s, precision: int = 30, margin: float = 0.1):
    """zeta(s) for Re s >= 1 + margin: partial sums plus Euler-Maclaurin tail."""
    check_precision(precision)
    s = _number(s)
    if s == 1:
        raise PoleError("zeta has a pole at s = 1")
    sigma = mpmath.re(s)
    if sigma < 1 + margin:
        raise PrecisionBudgetError(
            f"Re s = {mpmath.nstr(sigma, 8)} is within margin {margin} of the pole; "
            "the Dirichlet series cannot reach the requested precision there",
            minimum=None,
        )
    wd = precision + guard_digits(precision)
    with mp.workdps(wd + 10):
        n_cut = math.ceil(wd / 2) + math.ceil(float(abs(s))) + 10
        head = mpmath.fsum(mpf(n) ** (-s) for n in range(1, n_cut))
        big_n = mpf(n_cut)
        total = head + big_n ** (1 - s) / (s - 1) + big_n ** (-s) / 2
        eps = mpf(10) ** (-wd - 5)
        # p_j = s(s+1)...(s+2j-2) / (2j)! * N^(-s-2j+1)
        p = s * big_n ** (-s - 1) / 2
        for j in range(1, 4 * wd + 40):
            term = p * _number(bernoulli(2 * j))
            total += term
            if abs(term) < eps:
                break
            p *= (s + 2 * j - 1) * (s + 2 * j) / ((2 * j + 1) * (2 * j + 2) * big_n ** 2)
        else:
            raise ConditioningError(f"Euler-Maclaurin tail did not converge at s={s}")
    with mp.workdps(wd):
        out = +total
    return mpmath.re(out) if _is_real(s) else out


def zeta_continued(s, precision: int = 30):
    """zeta(s) for Re s > 0 from the accelerated alternating (eta) series."""
    check_precision(precision)
    s = _number(s)
    if s == 1:
        raise PoleError("zeta has a pole at s = 1")
    if mpmath.re(s) <= 0:
        raise DomainError("zeta_continued covers Re s > 0 only")
    wd = precision + guard_digits(precision)
    with mp.workdps(wd + 10):
        prefactor = 1 - mpmath.power(2, 1 - s)
        q = abs(prefactor)
        loss = 0 if q >= 1 else -float(mpmath.log10(q)) if q > 0 else math.inf
        if loss > 10:
            raise ConditioningError(
                f"1 - 2^(1-s) is {mpmath.nstr(q, 3)} at s={mpmath.nstr(s, 12)}; "
                "the alternating-series continuation is ill-conditioned here"
            )
    wd += math.ceil(loss)
    t = abs(float(mpmath.im(s)))
    n = math.ceil((wd * math.log(10) + math.pi * t / 2 + math.log(3 + 2 * t) + 3)
                  / math.log(3 + math.sqrt(8)))
    with mp.workdps(wd + 10):
        # Cohen-Rodriguez Villegas-Zagier weights for sum (-1)^k a_k
        d = (3 + mpmath.sqrt(8)) ** n
        d = (d + 1 / d) / 2
        b = mpf(-1)
        c = -d
        acc = mpf(0)
        for k in range(n):
            c = b - c
            acc += c * mpf(k + 1) ** (-s)
            b = b * (k + n) * (k - n) / ((k + mpf(0.5)) * (k + 1))
        eta = acc / d
        out = eta / prefactor
    with mp.workdps(wd):
        out = +out
    out = _finite(out, "zeta_continued")
    return mpmath.re(out) if _is_real(s) else out


def zeta_maslanka(s, K: int, precision: int = 30):
    """Truncated Maslanka series through k = K.

    The Gamma ratio Gamma(k+1-s/2) / Gamma(1-s/2) is carried as the rising
    product prod_{j=1..k} (j - s/2), so even integers s cause no poles.
    """
    check_precision(precision)
    if isinstance(K, bool) or not isinstance(K, int) or K < 1:
        raise DomainError(f"truncation K must be a positive integer, got {K!r}")
    s = _number(s)
    if s == 1:
        raise PoleError("zeta has a pole at s = 1")
    wd = precision + guard_digits(precision)
    # the inner binomial transform cancels terms of size ~ (2K+1) 2^K
    inner = wd + math.ceil(LOG10_2 * K + math.log10(2 * K + 1)) + 5
    table = shared_zeta_table(K + 1, inner)
    with mp.workdps(inner):
        weights = [(2 * j + 1) * table.zeta(j + 1) for j in range(K + 1)]
        total = mpf(0)
        ratio = mpf(1)
        half = s / 2
        for k in range(K + 1):
            if k:
                ratio = ratio * (k - half) / k
            binom = 1
            a_k = mpf(0)
            for j in range(k + 1):
                term = binom * weights[j]
                a_k = a_k - term if j % 2 else a_k + term
                binom = binom * (k - j) // (j + 1)
            total += ratio * a_k
        out = total / (s - 1)
    with mp.workdps(wd):
        out = +out
    return mpmath.re(out) if _is_real(s) else out


# --------------------------------------------------------------------------
# complex Gamma

def gamma_complex(z, precision: int = 30):
    """Gamma(z) from the Stirling series after shifting Re z upward."""
    check_precision(precision)
    z = _number(z)
    if _is_real(z):
        zr = mpmath.re(z)
        if zr <= 0 and zr == mpmath.floor(zr):
            raise PoleError(f"Gamma has a pole at z = {mpmath.nstr(zr, 15)}")
    wd = precision + guard_digits(precision)
    radius = (wd + 5) * math.log(10) / (2 * math.pi) + 2
    shift = max(0, math.ceil(radius - float(mpmath.re(z))))
    mag = float(abs(z)) + shift + 2
    extra = math.ceil(math.log10(mag * (math.log(mag) + 1)))
    with mp.workdps(wd + 10 + extra + len(str(shift))):
        w = z + shift
        log_gamma = (w - mpf(0.5)) * mpmath.log(w) - w + mpmath.log(2 * mp.pi) / 2
        eps = mpf(10) ** (-wd - 8)
        w2 = w * w
        wpow = w
        for j in range(1, 4 * wd + 40):
            b = bernoulli(2 * j)
            term = mpf(b.numerator) / (b.denominator * (2 * j) * (2 * j - 1)) / wpow
            log_gamma += term
            if abs(term) < eps:
                break
            wpow *= w2
        else:
            raise ConditioningError(f"Stirling series did not converge at z={z}")
    with mp.workdps(wd + 10 + extra + len(str(shift))):
        out = mpmath.exp(log_gamma)
        prod = mpf(1)
        for i in range(shift):
            prod *= z + i
        out = out / prod
    with mp.workdps(wd):
        out = +out
    out = _finite(out, "gamma_complex")
    return mpmath.re(out) if _is_real(z) else out
