import mpmath
import pytest
from mpmath import mp, mpf

from rhlab.debruijn import (HIntegrator, gauss_legendre, h_lambda, phi, phi_cutoff,
                            real_zero_scan, xi_on_line)
from rhlab.errors import DomainError


def phi_direct(t, terms):
    """Three-line transcription of the kernel sum at 50 digits."""
    with mp.workdps(50):
        t = mpf(t)
        return mpmath.fsum((2 * mp.pi ** 2 * n ** 4 * mpmath.exp(9 * t)
                            - 3 * mp.pi * n ** 2 * mpmath.exp(5 * t))
                           * mpmath.exp(-mp.pi * n ** 2 * mpmath.exp(4 * t))
                           for n in range(1, terms + 1))


@pytest.fixture(scope="module")
def integ0():
    return HIntegrator(0, 20)


def test_phi_values():
    p = phi(0, 20)
    assert abs(p.value - phi_direct(0, 3)) < 1e-8
    assert abs(p.value - mpf("0.4466969")) < 1e-6
    with mp.workdps(30):
        assert abs(p.value - phi_direct(0, 12)) < mpf(10) ** -20
    assert phi(3, 20).value < mpf(10) ** -100
    assert phi(2, 20).terms_used <= phi(0, 20).terms_used


def test_phi_domain():
    with pytest.raises(DomainError):
        phi(-0.1)


def test_phi_dual_precision():
    for t in ("0", "0.1", "0.5", "1.2"):
        a, b = phi(t, 30).value, phi(t, 50).value
        with mp.workdps(60):
            assert abs(a - b) <= mpf(10) ** -30


def test_phi_cutoff_is_tight():
    T = phi_cutoff(0, 25)
    assert phi(T, 30).value < mpf(10) ** -25
    assert phi(T * 0.9, 30).value > mpf(10) ** -30


def test_gauss_legendre_exact_on_polynomials():
    nodes, weights = gauss_legendre(24, 30)
    with mp.workdps(40):
        assert abs(sum(weights) - 2) < mpf(10) ** -28
        assert abs(sum(w * x ** 46 for x, w in zip(nodes, weights)) - mpf(2) / 47) < mpf(10) ** -28


def test_xi_values():
    p = 30
    with mp.workdps(60):
        ref = mpf(0.5) * mpf(-0.25) * mp.pi ** mpf(-0.25) * mpmath.gamma(mpf(0.25)) * mpmath.zeta(0.5)
    x0 = xi_on_line(0, p)
    with mp.workdps(60):
        assert abs(x0 - ref) < mpf(10) ** -p
        assert abs(x0 - mpf("0.4971207782")) < 1e-9


def test_xi_vanishes_at_first_zero(zero_table):
    assert abs(xi_on_line(zero_table.gammas[0], 30)) < 1e-6


@pytest.mark.parametrize("z", ["0.3", "5", "17.5", "40"])
def test_xi_even(z):
    a, b = xi_on_line(z, 25), xi_on_line("-" + z, 25)
    with mp.workdps(40):
        assert abs(a - b) <= mpf(10) ** -25


def test_xi_dual_precision():
    for z in ("3", "21.02"):
        a, b = xi_on_line(z, 25), xi_on_line(z, 45)
        with mp.workdps(60):
            assert abs(a - b) <= mpf(10) ** -25


def test_h_at_zero(integ0):
    ev = integ0.evaluate(0)
    with mp.workdps(30):
        assert abs(ev.value - xi_on_line(0, 25) / 8) < mpf(10) ** -18
        assert abs(ev.value - mpf("0.0621")) < 1e-4
    assert ev.quadrature_error >= 0


def test_keystone_identity(integ0):
    worst = mpf(0)
    with mp.workdps(30):
        for z in range(0, 51):
            h = integ0.evaluate(z).value
            worst = max(worst, abs(h - xi_on_line(mpf(z) / 2, 25) / 8))
    assert worst <= 1e-6
    assert worst <= 1e-15


def test_node_doubling_stability(integ0):
    for z in (0, 13, 47):
        ev = integ0.evaluate(z)
        refined = integ0.rule(z, 2 * ev.panels)
        with mp.workdps(30):
            assert abs(refined - ev.value) <= max(2 * ev.quadrature_error, mpf(10) ** -20)


def test_h_lambda_matches_integrator():
    a = h_lambda(7, 0, 15).value
    with mp.workdps(30):
        assert abs(a - HIntegrator(0, 20).evaluate(7).value) < mpf(10) ** -14


def test_h_damping():
    with mp.workdps(30):
        assert abs(h_lambda(30, -1, 15).value) < abs(h_lambda(30, 0, 15).value)


def test_h_lambda_domain():
    with pytest.raises(DomainError):
        HIntegrator(1.5)
    HIntegrator(1, 15)


def test_h_positive_lambda_agrees_with_direct_quadrature():
    # mpmath's own quadrature of the same integrand as an oracle
    lam = mpf(0.5)
    with mp.workdps(25):
        f = lambda t: phi_direct(t, 6) * mpmath.exp(lam * t * t) * mpmath.cos(10 * t)
        ref = mpmath.quad(f, [0, 0.25, 0.5, 1, 2])
    val = h_lambda(10, lam, 15).value
    with mp.workdps(25):
        assert abs(val - ref) < mpf(10) ** -14


def test_zero_scan_first_zero(zero_table):
    found = real_zero_scan(0, (1, 40), 0.5, precision=15)
    assert len(found) == 1
    with mp.workdps(30):
        assert abs(found[0].z - 2 * mpf(zero_table.gammas[0])) < 1e-4
        assert found[0].hi - found[0].lo <= 1e-8


def test_zero_scan_matches_table(zero_table):
    found = real_zero_scan(0, (1, 100), 0.5, precision=15)
    assert len(found) == 10
    with mp.workdps(30):
        for b, g in zip(found, zero_table.gammas[:10]):
            assert abs(b.z - 2 * mpf(g)) < 1e-4


def test_zero_scan_empty_range():
    assert real_zero_scan(0, (5, 5), 0.5) == []
    with pytest.raises(DomainError):
        real_zero_scan(0, (1, 2), 0)
