"""Generate a table of zeta-zero ordinates for offline use.

Brackets sign changes of the Hardy Z-function on a sub-Gram grid with a
vectorized Riemann-Siegel sum (leading correction only), polishes each root
with mpmath's double-precision ``siegelz`` and checks the count against
Gram's law at the last Gram point of the run.

    python tools/make_zero_table.py 100000 data/zeros_100k.txt
"""
import argparse
import math
import sys

import numpy as np
from mpmath import fp, mp
from scipy.optimize import brentq


def theta(t):
    return (t / 2 * np.log(t / (2 * np.pi)) - t / 2 - np.pi / 8
            + 1 / (48 * t) + 7 / (5760 * t ** 3))


def hardy_z(t):
    t = np.asarray(t, dtype=float)
    a = np.sqrt(t / (2 * np.pi))
    n_max = np.floor(a).astype(int)
    th = theta(t)
    total = np.zeros_like(t)
    for n in range(1, int(n_max.max()) + 1):
        mask = n <= n_max
        total += np.where(mask, np.cos(th - t * math.log(n)) / math.sqrt(n), 0.0)
    p = a - n_max
    c0 = np.cos(2 * np.pi * (p * p - p - 1 / 16)) / np.cos(2 * np.pi * p)
    sign = np.where(n_max % 2 == 1, 1.0, -1.0)
    return 2 * total + sign * (t / (2 * np.pi)) ** -0.25 * c0


def gram_points(count):
    # Newton on theta(g) = j*pi for j = -1 .. count
    j = np.arange(-1, count + 1, dtype=float)
    g = 2 * np.pi * np.exp(1 + np.real(_lambertw((8 * j + 1) / (8 * np.e))))
    for _ in range(6):
        f = theta(g) - j * np.pi
        fp_ = 0.5 * np.log(g / (2 * np.pi))
        g = g - f / fp_
    return g


def _lambertw(x):
    from scipy.special import lambertw
    return lambertw(x)


def brackets(count, sub=8):
    g = gram_points(count + 200)
    grid = np.concatenate([
        np.linspace(g[i], g[i + 1], sub, endpoint=False) for i in range(len(g) - 1)
    ] + [g[-1:]])
    grid = np.concatenate([np.linspace(10.0, g[0], 40, endpoint=False), grid])
    vals = np.empty_like(grid)
    for start in range(0, len(grid), 20000):
        vals[start:start + 20000] = hardy_z(grid[start:start + 20000])
    idx = np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]
    lo, hi = list(grid[idx]), list(grid[idx + 1])
    # close pairs hide inside one grid cell: |Z| dips without a sign change
    a = np.abs(vals)
    same = (np.sign(vals[:-2]) == np.sign(vals[1:-1])) & (np.sign(vals[1:-1]) == np.sign(vals[2:]))
    dips = np.nonzero(same & (a[1:-1] < a[:-2]) & (a[1:-1] < a[2:]))[0] + 1
    for i in dips:
        xs = np.linspace(grid[i - 1], grid[i + 1], 257)
        z = hardy_z(xs)
        j = np.nonzero(np.sign(z[:-1]) != np.sign(z[1:]))[0]
        lo += list(xs[j])
        hi += list(xs[j + 1])
    order = np.argsort(lo)
    print(f"{len(dips)} dips, {len(lo) - len(idx)} extra brackets", file=sys.stderr)
    return np.asarray(lo)[order], np.asarray(hi)[order], g


def _bisect(lo, hi, steps):
    flo = hardy_z(lo)
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        fm = hardy_z(mid)
        left = np.sign(fm) == np.sign(flo)
        lo = np.where(left, mid, lo)
        flo = np.where(left, fm, flo)
        hi = np.where(left, hi, mid)
    return lo, hi


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("count", type=int)
    ap.add_argument("out")
    args = ap.parse_args(argv)
    lo, hi, g = brackets(args.count)
    lo, hi = _bisect(lo, hi, steps=14)
    zeros = polish(lo, hi)
    return finish(zeros, g, args.count, args.out)


def polish(lo, hi):
    zeros = []
    z = lambda t: float(fp.siegelz(t))
    for a, b in zip(lo, hi):
        w = 2e-3
        a1, b1 = a - w, b + w
        if z(a1) * z(b1) < 0:
            zeros.append(brentq(z, a1, b1, xtol=1e-12))
            continue
        # leading-order sum disagreed with the reference near a root pair
        mid = np.linspace(a - 0.3, b + 0.3, 121)
        fm = [z(x) for x in mid]
        for x0, x1, f0, f1 in zip(mid[:-1], mid[1:], fm[:-1], fm[1:]):
            if f0 * f1 < 0:
                zeros.append(brentq(z, x0, x1, xtol=1e-12))
    return zeros


def finish(zeros, g, count, out):
    zeros = np.sort(np.array(zeros))
    zeros = zeros[np.concatenate([[True], np.diff(zeros) > 1e-7])]
    last_gram = g[count]  # Gram point g_{count-1}; N(g_{n}) = n + 1 when Gram's law holds
    below = int(np.sum(zeros < last_gram))
    print(f"zeros found: {len(zeros)}; below g_{count - 1}: {below} (expect {count})",
          file=sys.stderr)
    # N(g_n) - (n + 1) = S(g_n) stays within a couple of units when nothing is missing
    ns = np.arange(0, count, max(1, count // 1000))
    drift = np.searchsorted(zeros, g[ns + 1]) - (ns + 1)
    print(f"count drift at sampled Gram points: min {drift.min()}, max {drift.max()}",
          file=sys.stderr)
    gaps = np.diff(zeros)
    print(f"min gap {gaps.min():.3e}", file=sys.stderr)
    zeros = zeros[:count]
    with open(out, "w") as fh:
        fh.write(f"# first {len(zeros)} positive ordinates of nontrivial zeta zeros\n")
        fh.write("# Riemann-Siegel bracketing + mpmath fp.siegelz Brent polish, xtol 1e-12\n")
        for t in zeros:
            fh.write(f"{t:.9f}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
