"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line that is echoed in the terminal summary.
"""
import time

import mpmath
import pytest
from mpmath import mp, mpf

from rhlab.baez_duarte import ENVELOPE_A, ck, ck_range
from rhlab.classical import default_koch_checkpoints, koch_check, lagarias_scan
from rhlab.cli import run
from rhlab.debruijn import HIntegrator, phi, real_zero_scan, xi_on_line
from rhlab.li_coefficients import li_lambdas
from rhlab.mp_kernel import zeta_continued, zeta_dirichlet, zeta_maslanka
from rhlab.riesz import bridge_check, riesz_R, series_identity_check

from sympy import primepi

RESULTS = {}


def record(n, ok, detail):
    RESULTS[n] = f"ACCEPTANCE {n:>2} {'PASS' if ok else 'FAIL'}  {detail}"
    assert ok, detail


def test_criterion_01_closed_alternating_sum(tmp_path, capsys):
    t = time.perf_counter()
    code = run(["altsum", "--precision", "16", "--out", str(tmp_path / "a.csv")])
    dt = time.perf_counter() - t
    printed = capsys.readouterr().out.splitlines()[0]
    record(1, code == 0 and printed == "0.7825279853253842" and dt < 1,
           f"altsum --precision 16 printed {printed} in {dt:.2f}s")


def test_criterion_02_envelope():
    lo, hi = 2000, 20000
    series = ck_range(lo, hi, 10, 20, window=(lo, hi))
    sup = series.envelope_stat
    budget_ok = all(e.precision_used >= 0.30103 * e.k + 20 for e in series)
    upper = 1.05 * ENVELOPE_A
    with mp.workdps(30):
        ok = budget_ok and mpf("0.55e-5") <= sup <= upper
    record(2, ok, f"sup |c_k| k^(3/4) over [{lo},{hi}] stride 10 = {mpmath.nstr(sup, 6)} "
                  f"at k={series.envelope_argmax}; required [5.5e-6, {mpmath.nstr(upper, 6)}]")


def test_criterion_03_bridge_bound():
    reps = [bridge_check(k, 30) for k in (50, 100, 200, 500, 1000)]
    worst = max(reps, key=lambda r: r.gap / r.allowance)
    record(3, all(r.passed for r in reps),
           "gap/(bound + k^-2) max " + mpmath.nstr(worst.gap / worst.allowance, 4) +
           f" at k={worst.k}")


def test_criterion_04_generating_identity():
    d = series_identity_check(10, 100, 30)
    record(4, d <= 1e-10, f"|sum_(k<=100) c_k 10^k/k! - e^10 R(10)/10| = {mpmath.nstr(d, 4)}")


def test_criterion_05_lagarias():
    t = time.perf_counter()
    rep = lagarias_scan(10**6)
    dt = time.perf_counter() - t
    s = rep.summary()
    r12 = float(rep.ratio[11])
    ok = (not s["violations"] and rep.near_miss_count > 0 and bool(rep.near_miss[11])
          and abs(r12 - 0.989) <= 1e-3 and dt < 60)
    record(5, ok, f"N=1e6: {len(s['violations'])} violations, {rep.near_miss_count} near misses, "
                  f"ratio(12)={r12:.5f}, {dt:.1f}s")


def test_criterion_06_koch():
    rep = koch_check(default_koch_checkpoints(10**6, 100))
    pi_mill = int(rep.extra["pi"][-1])
    ok = rep.max_ratio < 0.15 and pi_mill == 78498 == int(primepi(10**6))
    record(6, ok, f"max ratio {rep.max_ratio:.4f} at x={rep.argmax}; pi(1e6)={pi_mill}")


def test_criterion_07_maslanka():
    with mp.workdps(40):
        err = abs(zeta_maslanka(3, 60, 20) - zeta_dirichlet(3, 30))
    record(7, err <= 1e-8, f"|zeta_maslanka(3, K=60) - zeta(3)| = {mpmath.nstr(err, 4)}")


def test_criterion_08_li_positivity(zero_table):
    ests = li_lambdas(range(1, 21), zero_table)
    half = li_lambdas([1], zero_table.head(zero_table.count // 2))[0]
    lam1 = ests[0]
    ok = (zero_table.count >= 10**5 and all(e.value - e.tail_bound > 0 for e in ests)
          and abs(lam1.value - 0.0231) <= 5e-4
          and abs(lam1.value - half.value) < half.tail_bound)
    worst = min(ests, key=lambda e: e.value - e.tail_bound)
    record(8, ok, f"{zero_table.count} zeros: lambda_1={lam1.value:.7f} "
                  f"(half table {half.value:.7f}); min lambda_n - tail {worst.value - worst.tail_bound:.3e} "
                  f"at n={worst.n}")


def test_criterion_09_debruijn_keystone(zero_table):
    integ = HIntegrator(0, 20)
    with mp.workdps(30):
        worst = max(abs(integ.evaluate(z).value - xi_on_line(mpf(z) / 2, 25) / 8)
                    for z in range(0, 51, 5))
    found = real_zero_scan(0, (1, 100), 0.5, precision=15)
    with mp.workdps(30):
        devs = [abs(b.z - 2 * mpf(g)) for b, g in zip(found[:3], zero_table.gammas[:3])]
    ok = worst <= 1e-6 and len(devs) == 3 and max(devs) <= 1e-4
    record(9, ok, f"max |H(z,0) - Xi(z/2)/8| = {mpmath.nstr(worst, 3)}; "
                  f"first three zeros within {mpmath.nstr(max(devs), 3)} of 2 gamma_k")


def test_criterion_10_dual_precision(tmp_path):
    p = 25
    q = p + 20
    tol = mpf(10) ** -p
    cases = {
        "c_k": lambda prec: [ck(k, prec) for k in (0, 1, 10, 100, 1000)],
        "R": lambda prec: [riesz_R(x, prec) for x in (1, "7.5", 50)],
        "Phi": lambda prec: [phi(t, prec).value for t in (0, "0.25", 1)],
        "H": lambda prec: [HIntegrator(0, prec).evaluate(z).value for z in (0, 14, 30)],
        "Xi": lambda prec: [xi_on_line(z, prec) for z in (0, 7, "14.134725")],
        "zeta_dirichlet": lambda prec: [zeta_dirichlet(s, prec) for s in (2, 3, mpmath.mpc(2, 9))],
        "zeta_continued": lambda prec: [zeta_continued(s, prec) for s in
                                        ("0.5", mpmath.mpc(0.5, 14), mpmath.mpc(0.8, 40))],
        "zeta_maslanka": lambda prec: [zeta_maslanka(s, 30, prec) for s in (3, "2.5")],
    }
    bad = []
    with mp.workdps(q + 20):
        for name, f in cases.items():
            for a, b in zip(f(p), f(q)):
                if abs(a - b) > tol:
                    bad.append(name)
    outs = []
    for w in ("1", "2"):
        path = tmp_path / f"ck{w}.csv"
        assert run(["ck", "--kmin", "0", "--kmax", "600", "--stride", "3", "--workers", w,
                    "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    same = outs[0] == outs[1]
    record(10, not bad and same,
           f"{len(cases)} kernels at p={p} vs p={q}: {'all agree' if not bad else 'disagree: ' + ','.join(sorted(set(bad)))}; "
           f"ck CSV byte-identical across workers: {same}")
