"""Polya kernel Phi(t), the completed zeta Xi on the critical line, and the
Gaussian-deformed cosine transform H(z, lambda) = int_0^inf Phi(t) e^(lambda t^2) cos(zt) dt.

With this normalisation H(z, 0) = Xi(z/2) / 8, where
Xi(z) = xi(1/2 + iz) = s(s-1)/2 pi^(-s/2) Gamma(s/2) zeta(s) at s = 1/2 + iz
is real and even on the real line.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import mpmath
from mpmath import mp, mpf

from .errors import ConditioningError, DomainError
from .mp_kernel import check_precision, gamma_complex, guard_digits, zeta_continued

__all__ = [
    "HEvaluation",
    "HIntegrator",
    "PhiProfile",
    "ZeroBracket",
    "gauss_legendre",
    "h_lambda",
    "phi",
    "phi_cutoff",
    "real_zero_scan",
    "xi_on_line",
]

LAMBDA_MAX = 1
GL_ORDER = 24


@dataclass(frozen=True)
class PhiProfile:
    t: mpf
    value: mpf
    terms_used: int


def _phi_sum(t, digits):
    """(Phi(t), terms) with the n-th term bound 2 pi^2 n^4 e^(9t) exp(-pi n^2 e^(4t))."""
    eps = mpf(10) ** (-digits)
    e4 = mpmath.exp(4 * t)
    e5 = mpmath.exp(5 * t)
    e9 = mpmath.exp(9 * t)
    pi = mp.pi
    total = mpf(0)
    n = 1
    while True:
        n2 = n * n
        g = mpmath.exp(-pi * n2 * e4)
        lead = 2 * pi * pi * n2 * n2 * e9 * g
        total += lead - 3 * pi * n2 * e5 * g
        if lead < eps:
            return total, n
        n += 1


def phi(t, precision: int = 30) -> PhiProfile:
    check_precision(precision)
    t = mpmath.mpmathify(t)
    if t < 0:
        raise DomainError("phi is evaluated for t >= 0")
    wd = precision + guard_digits(precision)
    with mp.workdps(wd):
        value, terms = _phi_sum(+t, precision + 5)
    return PhiProfile(t, value, terms)


def phi_cutoff(lam, digits: int) -> float:
    """Smallest T (to ~1e-15) with 2 pi^2 e^(9T) exp(-pi e^(4T)) e^(lam T^2) < 10^-digits."""
    lam = float(lam)

    def log_bound(t):
        return math.log(2 * math.pi ** 2) + 9 * t - math.pi * math.exp(4 * t) + lam * t * t

    target = -digits * math.log(10)
    # decreasing on t >= 0 for lam <= 1: 9 - 4 pi e^(4t) + 2 lam t < 0
    lo, hi = 0.0, 0.5
    while log_bound(hi) >= target:
        hi *= 2
    for _ in range(60):
        mid = (lo + hi) / 2
        if log_bound(mid) < target:
            hi = mid
        else:
            lo = mid
    return hi


_gl_lock = threading.Lock()
_gl_cache: dict = {}


def gauss_legendre(order: int, digits: int):
    """Nodes and weights on [-1, 1] by Newton iteration on P_order."""
    key = (order, digits)
    with _gl_lock:
        if key in _gl_cache:
            return _gl_cache[key]
    with mp.workdps(digits + 10):
        nodes, weights = [], []
        eps = mpf(10) ** (-digits - 5)
        for i in range(1, order // 2 + 1):
            x = mpmath.cos(mp.pi * (i - mpf(0.25)) / (order + mpf(0.5)))
            for _ in range(100):
                p0, p1 = mpf(1), x
                for k in range(2, order + 1):
                    p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
                dp = order * (x * p1 - p0) / (x * x - 1)
                dx = p1 / dp
                x -= dx
                if abs(dx) < eps:
                    break
            w = 2 / ((1 - x * x) * dp * dp)
            nodes += [x, -x]
            weights += [w, w]
        if order % 2:
            p0, p1 = mpf(1), mpf(0)
            for k in range(2, order + 1):
                p0, p1 = p1, (-(k - 1) * p0) / k
            dp = order * (-p0)
            nodes.append(mpf(0))
            weights.append(2 / (dp * dp))
    with _gl_lock:
        _gl_cache[key] = (tuple(nodes), tuple(weights))
    return _gl_cache[key]


@dataclass(frozen=True)
class HEvaluation:
    z: mpf
    lam: mpf
    value: mpf
    quadrature_error: mpf
    panels: int


class HIntegrator:
    """Composite Gauss-Legendre rule for H(., lam) on [0, T].

    Phi(t) e^(lam t^2) is tabulated once per panel count and reused for every
    z, which is what makes zero scans affordable.
    """

    def __init__(self, lam=0, precision: int = 20, order: int = GL_ORDER):
        check_precision(precision)
        lam = mpmath.mpmathify(lam)
        if lam > LAMBDA_MAX:
            raise DomainError(
                f"lambda = {mpmath.nstr(lam, 8)} exceeds {LAMBDA_MAX}; the truncation rule "
                "no longer dominates e^(lambda t^2)")
        self.lam = lam
        self.precision = precision
        self.order = order
        self.wd = precision + guard_digits(precision)
        self.cutoff = mpf(phi_cutoff(lam, precision + 5))
        self._tables = {}

    def _table(self, panels: int):
        if panels not in self._tables:
            nodes, weights = gauss_legendre(self.order, self.wd)
            with mp.workdps(self.wd):
                h = self.cutoff / panels
                ts, ws = [], []
                for p in range(panels):
                    mid = h * (p + mpf(0.5))
                    for x, w in zip(nodes, weights):
                        t = mid + h * x / 2
                        f, _ = _phi_sum(t, self.wd)
                        if f <= 0:
                            raise ConditioningError(f"Phi({mpmath.nstr(t, 10)}) is not positive")
                        ts.append(t)
                        ws.append(w * h / 2 * f * mpmath.exp(self.lam * t * t))
            self._tables[panels] = (ts, ws)
        return self._tables[panels]

    def rule(self, z, panels: int):
        ts, ws = self._table(panels)
        with mp.workdps(self.wd):
            z = mpmath.mpmathify(z)
            return mpmath.fsum(w * mpmath.cos(z * t) for t, w in zip(ts, ws))

    def initial_panels(self, z) -> int:
        # about one panel per half oscillation of cos(zt) across [0, T]
        return max(4, 2 ** math.ceil(math.log2(max(1.0, abs(float(z)) * float(self.cutoff) / math.pi))))

    def panels_for(self, z_max, max_panels: int = 4096) -> int:
        """Smallest panel count whose doubling changes H(z_max) by <= 10^-precision."""
        return self.evaluate(z_max, max_panels).panels

    def evaluate(self, z, max_panels: int = 4096) -> HEvaluation:
        tol = mpf(10) ** (-self.precision)
        panels = self.initial_panels(z)
        coarse = self.rule(z, panels)
        while True:
            fine = self.rule(z, 2 * panels)
            with mp.workdps(self.wd):
                err = abs(fine - coarse)
            if err <= tol:
                return HEvaluation(mpmath.mpmathify(z), self.lam, fine, err, 2 * panels)
            panels *= 2
            if panels > max_panels:
                raise ConditioningError(
                    f"H({mpmath.nstr(z, 8)}, {mpmath.nstr(self.lam, 4)}) did not settle "
                    f"within {max_panels} panels (last change {mpmath.nstr(err, 3)})")
            coarse = fine


def h_lambda(z, lam=0, precision: int = 20) -> HEvaluation:
    return HIntegrator(lam, precision).evaluate(z)


def xi_on_line(z, precision: int = 30) -> mpf:
    """Xi(z) = xi(1/2 + iz) for real z."""
    check_precision(precision)
    z = mpmath.mpmathify(z)
    if isinstance(z, mpmath.mpc):
        raise DomainError("xi_on_line takes real z")
    wd = precision + guard_digits(precision)
    inner = wd + 5
    with mp.workdps(inner):
        s = mpmath.mpc(mpf(0.5), z)
        g = gamma_complex(s / 2, inner)
        zeta_s = zeta_continued(s, inner)
        val = s * (s - 1) / 2 * mpmath.power(mp.pi, -s / 2) * g * zeta_s
    with mp.workdps(wd):
        residue = abs(val.imag)
        if residue > mpf(10) ** (-precision + 2):
            raise ConditioningError(
                f"Xi({mpmath.nstr(z, 10)}) has imaginary residue {mpmath.nstr(residue, 3)}")
        return +val.real


@dataclass(frozen=True)
class ZeroBracket:
    lo: mpf
    hi: mpf

    @property
    def z(self):
        with mp.workdps(30):
            return (self.lo + self.hi) / 2


def real_zero_scan(lam, z_range, step, precision: int = 30, tol: float = 1e-8,
                   integrator: HIntegrator | None = None):
    """Sign changes of H(., lam) on a grid over ``z_range``, bisected to ``tol``."""
    step = mpmath.mpmathify(step)
    if step <= 0:
        raise DomainError("step must be positive")
    a, b = (mpmath.mpmathify(v) for v in z_range)
    if b <= a:
        return []
    integ = integrator or HIntegrator(lam, precision)
    panels = integ.panels_for(max(abs(a), abs(b)))
    f = lambda z: integ.rule(z, panels)
    n = int(mpmath.floor((b - a) / step))
    grid = [a + i * step for i in range(n + 1)]
    if grid[-1] < b:
        grid.append(b)
    vals = [f(z) for z in grid]
    out = []
    for z0, z1, f0, f1 in zip(grid, grid[1:], vals, vals[1:]):
        if f0 == 0:
            out.append(ZeroBracket(z0, z0))
            continue
        if f0 * f1 > 0 or f1 == 0:
            continue
        lo, hi, flo = z0, z1, f0
        while hi - lo > tol:
            mid = (lo + hi) / 2
            fm = f(mid)
            if fm == 0:
                lo = hi = mid
                break
            if (fm > 0) == (flo > 0):
                lo, flo = mid, fm
            else:
                hi = mid
        out.append(ZeroBracket(lo, hi))
    if vals[-1] == 0:
        out.append(ZeroBracket(grid[-1], grid[-1]))
    return out
