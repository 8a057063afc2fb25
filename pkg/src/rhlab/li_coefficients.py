"""Li coefficients lambda_n = sum_rho (1 - (1 - 1/rho)^n) from tabulated zeros.

Zero-table files hold one ordinate gamma_k per line (rho = 1/2 + i gamma_k);
blank lines and ``#`` comments are ignored; ``.gz`` files are read
transparently.
"""
from __future__ import annotations

import gzip
import math
import os
import re
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation

import mpmath
import numpy as np
from mpmath import mp, mpf

from .errors import DomainError, ZeroTableError
from .mp_kernel import guard_digits

__all__ = [
    "LiEstimate",
    "ZeroTable",
    "li_lambda",
    "li_lambda_complex",
    "li_lambdas",
    "li_tail_bound",
    "load_zeros",
]

MIN_ZEROS = 100
_NUMBER = re.compile(r"^[+]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")
_BLOCK = 4096


@dataclass(frozen=True)
class ZeroTable:
    """Ordinates exactly as written in the source file, plus a float copy."""

    gammas: tuple
    source: str = "<memory>"

    @property
    def count(self) -> int:
        return len(self.gammas)

    def __len__(self):
        return len(self.gammas)

    @property
    def values(self) -> np.ndarray:
        return np.array([float(g) for g in self.gammas])

    def head(self, count: int) -> "ZeroTable":
        return ZeroTable(self.gammas[:count], f"{self.source}[:{count}]")

    @classmethod
    def from_values(cls, values, source="<memory>"):
        return cls(tuple(repr(float(v)) if not isinstance(v, str) else v for v in values), source)


def _open_text(path):
    path = os.fspath(path)
    if path.endswith(".gz"):
        return gzip.open(path, "rt", encoding="ascii")
    return open(path, "r", encoding="ascii")


def load_zeros(path) -> ZeroTable:
    gammas = []
    prev = None
    try:
        fh = _open_text(path)
    except OSError as exc:
        raise ZeroTableError(f"cannot open zero table {path}: {exc}") from exc
    with fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.split("#", 1)[0].strip()
            if not text:
                continue
            if not _NUMBER.match(text):
                raise ZeroTableError(f"not a decimal ordinate: {text!r}", line=lineno)
            try:
                value = Decimal(text)
            except InvalidOperation as exc:  # pragma: no cover - regex guards this
                raise ZeroTableError(f"not a decimal ordinate: {text!r}", line=lineno) from exc
            if value <= 14:
                raise ZeroTableError(f"ordinate {text} is not above 14", line=lineno)
            if prev is not None and value <= prev:
                raise ZeroTableError(
                    f"ordinates must be strictly increasing ({text} after {prev})", line=lineno)
            prev = value
            gammas.append(text)
    if not gammas:
        raise ZeroTableError(f"zero table {path} holds no ordinates")
    return ZeroTable(tuple(gammas), os.fspath(path))


@dataclass(frozen=True)
class LiEstimate:
    n: int
    value: object
    tail_bound: object
    zeros_used: int

    @property
    def lower(self):
        return self.value - self.tail_bound

    @property
    def verdict(self) -> str:
        return "positive" if self.lower > 0 else "undecided"


def li_tail_bound(n: int, gamma_max: float) -> float:
    """Heuristic size of the omitted zeros' contribution.

    Each pair beyond the table adds 4 sin^2(n theta/2) <= n^2/gamma^2; with
    zero density ln(t / 2 pi) / (2 pi) the integral from gamma_max is
    n^2 (ln(gamma_max / 2 pi) + 1) / (2 pi gamma_max).
    """
    t = float(gamma_max)
    return n * n * (math.log(t / (2 * math.pi)) + 1) / (2 * math.pi * t)


def _check_table(zeros: ZeroTable):
    if zeros.count < MIN_ZEROS:
        raise DomainError(f"need at least {MIN_ZEROS} zeros, table has {zeros.count}")


def _blocked_fsum(x: np.ndarray) -> float:
    # fixed association order: exact block sums, then an exact sum of those
    return math.fsum(math.fsum(x[i:i + _BLOCK]) for i in range(0, len(x), _BLOCK))


def li_lambdas(ns, zeros: ZeroTable, precision: int = 15):
    """LiEstimate for every n in ``ns`` over the conjugate pairs in ``zeros``.

    A pair 1/2 +- i gamma contributes 2 Re(1 - (1 - 1/rho)^n) = 4 sin^2(n theta/2)
    with theta = 2 arctan(1/(2 gamma)); |1 - 1/rho| = 1 on the critical line.
    Precision up to 15 digits runs in doubles, beyond that in mpmath.
    """
    ns = [int(n) for n in ns]
    if any(n < 1 for n in ns):
        raise DomainError("n must be >= 1")
    _check_table(zeros)
    gmax = float(zeros.gammas[-1])
    out = []
    if precision <= 15:
        g = zeros.values
        theta = 2 * np.arctan(1 / (2 * g))
        for n in ns:
            terms = 4 * np.sin(n * theta / 2) ** 2
            out.append(LiEstimate(n, _blocked_fsum(terms), li_tail_bound(n, gmax), zeros.count))
        return out
    wd = precision + guard_digits(precision)
    with mp.workdps(wd):
        thetas = [2 * mpmath.atan(1 / (2 * mpf(s))) for s in zeros.gammas]
        for n in ns:
            value = mpmath.fsum(4 * mpmath.sin(n * th / 2) ** 2 for th in thetas)
            out.append(LiEstimate(n, value, mpf(li_tail_bound(n, gmax)), zeros.count))
    return out


def li_lambda(n: int, zeros: ZeroTable, precision: int = 15) -> LiEstimate:
    return li_lambdas([n], zeros, precision)[0]


def li_lambda_complex(n: int, zeros: ZeroTable, precision: int = 30):
    """Naive complex sum over rho and conj(rho) separately; for cross-checks only."""
    wd = precision + guard_digits(precision)
    with mp.workdps(wd):
        acc = mpmath.mpc(0)
        for s in zeros.gammas:
            for rho in (mpmath.mpc(0.5, mpf(s)), mpmath.mpc(0.5, -mpf(s))):
                acc += 1 - (1 - 1 / rho) ** n
        return acc
