"""Sieve-based criteria: the Lagarias divisor-sum inequality and Koch's
bound on |pi(x) - Li(x)|."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
from mpmath import mp, mpf

from .errors import CapacityError, DomainError
from .mp_kernel import bernoulli, check_precision, guard_digits

__all__ = [
    "DivisorSigmaTable",
    "ScanReport",
    "default_koch_checkpoints",
    "harmonic",
    "iter_sigma_segments",
    "koch_check",
    "lagarias_scan",
    "lagarias_threshold",
    "li_integral",
    "prime_pi_sieve",
    "sigma_sieve",
]

MAX_TABLE = 5 * 10**7  # largest sigma table held in memory at once
MAX_SCAN = 10**9
SEGMENT = 1 << 20
HARMONIC_EXACT_CUTOFF = 10**4
THRESHOLD_DIGITS = 40


# --------------------------------------------------------------------------
# divisor sums

@dataclass(frozen=True)
class DivisorSigmaTable:
    N: int
    sigma: np.ndarray  # sigma[n] for n = 0..N, sigma[0] = 0

    def __getitem__(self, n):
        return int(self.sigma[n])


def _sigma_segment(lo: int, hi: int) -> np.ndarray:
    """sigma(n) for lo <= n < hi by pairing divisors d <= sqrt(n) with n/d."""
    out = np.zeros(hi - lo, dtype=np.int64)
    for d in range(1, math.isqrt(hi - 1) + 1):
        q_lo = max(d, -(-lo // d))
        q_hi = (hi - 1) // d
        if q_hi < q_lo:
            continue
        q = np.arange(q_lo, q_hi + 1, dtype=np.int64)
        out[d * q - lo] += d + q
        if q_lo == d:
            out[d * d - lo] -= d
    return out


def iter_sigma_segments(N: int, segment: int = SEGMENT):
    """Yield (start, sigma array) covering 1..N in order."""
    if N > MAX_SCAN:
        raise CapacityError(f"N = {N} exceeds the scan capacity {MAX_SCAN}")
    lo = 1
    while lo <= N:
        hi = min(N + 1, lo + segment)
        yield lo, _sigma_segment(lo, hi)
        lo = hi


def sigma_sieve(N: int) -> DivisorSigmaTable:
    if isinstance(N, bool) or not isinstance(N, int) or N < 1:
        raise DomainError(f"N must be a positive integer, got {N!r}")
    if N > MAX_TABLE:
        raise CapacityError(
            f"a full sigma table for N = {N} exceeds {MAX_TABLE} entries; "
            "use iter_sigma_segments for larger ranges"
        )
    sigma = np.zeros(N + 1, dtype=np.int64)
    for lo, seg in iter_sigma_segments(N):
        sigma[lo:lo + len(seg)] = seg
    return DivisorSigmaTable(N, sigma)


# --------------------------------------------------------------------------
# harmonic numbers

def _harmonic_fraction(a: int, b: int):
    # sum_{j=a}^{b-1} 1/j as (p, q) by binary splitting
    if b - a == 1:
        return 1, a
    m = (a + b) // 2
    p1, q1 = _harmonic_fraction(a, m)
    p2, q2 = _harmonic_fraction(m, b)
    return p1 * q2 + p2 * q1, q1 * q2


def harmonic_exact(n: int) -> Fraction:
    p, q = _harmonic_fraction(1, n + 1)
    return Fraction(p, q)


def harmonic(n: int, precision: int = 30) -> mpf:
    """H_n; exact rational summation up to 10^4, asymptotic series beyond."""
    check_precision(precision)
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    wd = precision + guard_digits(precision)
    with mp.workdps(wd + 5):
        if n <= HARMONIC_EXACT_CUTOFF:
            p, q = _harmonic_fraction(1, n + 1)
            out = mpf(p) / q
        else:
            # ln n + gamma + 1/(2n) - sum_j B_2j / (2j n^2j)
            nn = mpf(n)
            out = mpmath.log(nn) + mp.euler + 1 / (2 * nn)
            eps = mpf(10) ** (-wd - 5)
            inv2 = 1 / (nn * nn)
            pw = inv2
            for j in range(1, 200):
                b = bernoulli(2 * j)
                term = mpf(b.numerator) / (b.denominator * 2 * j) * pw
                out -= term
                if abs(term) < eps:
                    break
                pw *= inv2
    with mp.workdps(wd):
        return +out


# --------------------------------------------------------------------------
# scan reports

@dataclass
class ScanReport:
    """Per-row criterion evaluation.

    ``ratio = lhs / threshold``; a row is a near miss when ratio >= 1 - near_band
    and a violation when ratio > 1.
    """

    kind: str
    index: np.ndarray
    lhs: object
    threshold: object
    ratio: np.ndarray
    near_band: float = 0.05
    extra: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)
    rows_complete: bool = True
    summary_override: dict = field(default_factory=dict)

    @property
    def near_miss(self) -> np.ndarray:
        return self.ratio >= 1 - self.near_band

    @property
    def violations(self) -> np.ndarray:
        return self.index[self.ratio > 1]

    @property
    def max_ratio(self) -> float:
        return float(self.summary_override.get("max_ratio", np.max(self.ratio)))

    @property
    def argmax(self) -> int:
        if "argmax" in self.summary_override:
            return int(self.summary_override["argmax"])
        return int(self.index[int(np.argmax(self.ratio))])

    @property
    def near_miss_count(self) -> int:
        return int(self.summary_override.get("near_miss_count", np.count_nonzero(self.near_miss)))

    def summary(self) -> dict:
        return {
            "kind": self.kind,
            "rows": int(self.summary_override.get("rows", len(self.index))),
            "max_ratio": self.max_ratio,
            "argmax": self.argmax,
            "near_band": self.near_band,
            "near_miss_count": self.near_miss_count,
            "violations": [int(v) for v in self.violations],
            **self.notes,
        }


# --------------------------------------------------------------------------
# Lagarias

def lagarias_threshold(n: int, precision: int = THRESHOLD_DIGITS) -> mpf:
    """H_n + exp(H_n) log(H_n)."""
    with mp.workdps(precision + guard_digits(precision)):
        h = harmonic(n, precision)
        return h + mpmath.exp(h) * mpmath.log(h)


def _harmonic_float(lo: int, hi: int, prefix: float) -> np.ndarray:
    n = np.arange(lo, hi, dtype=np.float64)
    if hi - 1 <= HARMONIC_EXACT_CUTOFF:
        return prefix + np.cumsum(1.0 / n)
    inv = 1.0 / n
    inv2 = inv * inv
    return (np.log(n) + float(mp.euler) + inv / 2 - inv2 / 12 + inv2 * inv2 / 120
            - inv2 ** 3 / 252)


def lagarias_scan(N: int, near_band: float = 0.05, keep: str = "auto") -> ScanReport:
    """sigma(n) against H_n + e^H_n log H_n for n = 1..N.

    Ratios are formed in double precision; rows within 1e-9 of the violation
    or near-miss boundary are re-decided with 40-digit thresholds.  ``keep``
    selects stored rows: "all", "near" (near misses and violations only) or
    "auto" (all up to 10^7).
    """
    if isinstance(N, bool) or not isinstance(N, int) or N < 1:
        raise DomainError(f"N must be a positive integer, got {N!r}")
    if not 0 <= near_band < 1:
        raise DomainError(f"near_band must lie in [0, 1), got {near_band}")
    if keep == "auto":
        keep = "all" if N <= 10**7 else "near"
    if keep not in ("all", "near"):
        raise DomainError(f"keep must be 'all', 'near' or 'auto', got {keep!r}")
    cut = 1 - near_band
    parts = []
    total_rows = 0
    near_count = 0
    best = (-1.0, 0)
    prefix = 0.0
    for lo, sig in iter_sigma_segments(N):
        hi = lo + len(sig)
        if hi - 1 <= HARMONIC_EXACT_CUTOFF or lo > HARMONIC_EXACT_CUTOFF:
            h = _harmonic_float(lo, hi, prefix)
        else:
            h = np.concatenate([
                _harmonic_float(lo, HARMONIC_EXACT_CUTOFF + 1, prefix),
                _harmonic_float(HARMONIC_EXACT_CUTOFF + 1, hi, 0.0),
            ])
        prefix = float(h[-1])
        thr = h + np.exp(h) * np.log(h)
        ratio = sig / thr
        idx = np.arange(lo, hi, dtype=np.int64)
        edge = np.nonzero((np.abs(ratio - 1) < 1e-9) | (np.abs(ratio - cut) < 1e-9))[0]
        for i in edge:
            n = int(idx[i])
            with mp.workdps(THRESHOLD_DIGITS):
                t = lagarias_threshold(n)
                r = mpf(int(sig[i])) / t
                # exact ties stay ties: ratio == 1 is not a violation
                ratio[i] = 1.0 if r == 1 else float(r)
                thr[i] = float(t)
        total_rows += len(idx)
        near = ratio >= cut
        near_count += int(np.count_nonzero(near))
        j = int(np.argmax(ratio))
        if ratio[j] > best[0]:
            best = (float(ratio[j]), int(idx[j]))
        if keep == "near":
            m = near | (ratio > 1)
            parts.append((idx[m], sig[m], thr[m], ratio[m]))
        else:
            parts.append((idx, sig, thr, ratio))
    cat = [np.concatenate([p[i] for p in parts]) for i in range(4)]
    return ScanReport(
        "lagarias", cat[0], cat[1], cat[2], cat[3], near_band,
        notes={"N": N},
        rows_complete=(keep == "all"),
        summary_override={"max_ratio": best[0], "argmax": best[1],
                          "near_miss_count": near_count, "rows": total_rows},
    )


# --------------------------------------------------------------------------
# primes and the logarithmic integral

def _base_primes(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p::p] = False
    return np.nonzero(flags)[0]


def prime_pi_sieve(N: int, checkpoints=None, segment: int = 1 << 22) -> np.ndarray:
    """pi(x) at each checkpoint (default: [N]) from a segmented bit sieve up to N."""
    if isinstance(N, bool) or not isinstance(N, int) or N < 2:
        raise DomainError(f"N must be an integer >= 2, got {N!r}")
    if N > MAX_SCAN:
        raise CapacityError(f"N = {N} exceeds the sieve capacity {MAX_SCAN}")
    cps = np.asarray([N] if checkpoints is None else checkpoints, dtype=np.int64)
    if cps.size and (cps.min() < 0 or cps.max() > N):
        raise DomainError("checkpoints must lie in [0, N]")
    order = np.argsort(cps, kind="stable")
    out = np.zeros(len(cps), dtype=np.int64)
    base = _base_primes(math.isqrt(N))
    count_before = 0
    pos = 0
    lo = 0
    while lo <= N and pos < len(order):
        hi = min(N + 1, lo + segment)
        flags = np.ones(hi - lo, dtype=bool)
        if lo == 0:
            flags[: min(2, hi)] = False
        for p in base:
            p = int(p)
            if p * p >= hi:
                break
            start = max(p * p, -(-lo // p) * p)
            flags[start - lo::p] = False
        cum = np.cumsum(flags)
        while pos < len(order) and cps[order[pos]] < hi:
            x = int(cps[order[pos]])
            out[order[pos]] = count_before + (int(cum[x - lo]) if x >= lo else 0)
            pos += 1
        count_before += int(cum[-1])
        lo = hi
    return out


def li_integral(x, precision: int = 20, lower=2) -> mpf:
    """Li(x) = integral of 1/ln u over [2, x] by tanh-sinh quadrature on
    geometrically spaced panels."""
    check_precision(precision)
    x = mpmath.mpmathify(x)
    lower = mpmath.mpmathify(lower)
    if x < 2 or lower < 2:
        raise DomainError(f"Li(x) is defined here for x >= 2, got {mpmath.nstr(x, 12)}")
    if x < lower:
        raise DomainError("upper limit below lower limit")
    wd = precision + guard_digits(precision)
    with mp.workdps(wd):
        if x == lower:
            return mpf(0)
        pts = [lower]
        while pts[-1] * 4 < x:
            pts.append(pts[-1] * 4)
        pts.append(x)
        return mpmath.quad(lambda u: 1 / mpmath.log(u), pts)


def default_koch_checkpoints(x_max: int = 10**6, x_min: int = 100):
    """Every integer up to 1000, then 50 geometric points per decade."""
    if x_max < x_min:
        return []
    dense = list(range(x_min, min(x_max, 1000) + 1))
    sparse = []
    if x_max > 1000:
        decades = math.log10(x_max) - 3
        n = max(2, int(50 * decades) + 1)
        sparse = sorted({int(round(v)) for v in np.geomspace(1000, x_max, n)} - set(dense))
    cps = sorted(set(dense) | set(sparse) | {x_max})
    return [c for c in cps if x_min <= c <= x_max]


def koch_check(checkpoints=None, precision: int = 20, near_band: float = 0.05) -> ScanReport:
    """|pi(x) - Li(x)| / (sqrt(x) ln x) at each checkpoint.

    Li is accumulated panel by panel between consecutive checkpoints; pi(x)
    comes from one sieve to the largest checkpoint.
    """
    check_precision(precision)
    cps = sorted(set(int(c) for c in (default_koch_checkpoints() if checkpoints is None
                                       else checkpoints)))
    if not cps:
        raise DomainError("no checkpoints")
    if cps[0] < 2:
        raise DomainError("checkpoints must be >= 2")
    pis = prime_pi_sieve(cps[-1], cps)
    wd = precision + guard_digits(precision)
    lis, lhs, thr, ratio = [], [], [], []
    with mp.workdps(wd):
        acc = mpf(0)
        prev = 2
        for x, pi_x in zip(cps, pis):
            acc += li_integral(x, precision, lower=prev)
            prev = x
            li = +acc
            diff = abs(int(pi_x) - li)
            scale = mpmath.sqrt(x) * mpmath.log(x)
            lis.append(li)
            lhs.append(diff)
            thr.append(scale)
            ratio.append(float(diff / scale))
    below = all(int(p) < li for p, li in zip(pis, lis))
    return ScanReport(
        "koch", np.asarray(cps, dtype=np.int64), lhs, thr, np.asarray(ratio), near_band,
        extra={"pi": pis, "li": lis},
        notes={"li_lower_limit": 2, "pi_below_li": below},
    )
