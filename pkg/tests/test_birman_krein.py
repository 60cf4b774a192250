"""Bump test functions and the two sides of the trace identity.

The full identity check (both sides computed end to end) is expensive and
lives in the acceptance suite; here the bump machinery is verified against
independent quadrature and the cheap spectral side is exercised.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from wavetrace.birman_krein import (BumpSupportError, lhs_trace, make_bump,
                                    rhs_bk)
from wavetrace.potentials import make_poschl_teller
from wavetrace.trace import Grid


def test_bump_support_validation():
    with pytest.raises(BumpSupportError):
        make_bump(0.5, 0.5)      # support touches t = 0
    with pytest.raises(BumpSupportError):
        make_bump(1.5, -0.1)


def test_bump_is_normalized():
    f = make_bump(1.5, 0.5)
    integral, _ = quad(f, 1.0, 2.0, limit=200)
    assert integral == pytest.approx(1.0, abs=1e-12)
    assert f(1.0) == 0.0
    assert f(2.0) == 0.0
    assert f(2.5) == 0.0
    assert f(1.5) > 0.0


def test_fourier_against_scipy_quad():
    f = make_bump(1.5, 0.5)
    for lam in (0.0, 0.7, 3.0, 11.0):
        re, _ = quad(lambda t: f(t) * math.cos(lam * t), 1.0, 2.0, limit=400)
        im, _ = quad(lambda t: f(t) * math.sin(lam * t), 1.0, 2.0, limit=400)
        got = f.fourier(lam)
        assert abs(got - complex(re, im)) < 1e-10


def test_fourier_at_zero_is_one():
    f = make_bump(1.5, 0.5)
    assert abs(f.fourier(0.0) - 1.0) < 1e-12


def test_fourier_custom_order_agrees():
    f = make_bump(1.5, 0.5)
    assert abs(f.fourier(2.0, order=256) - f.fourier(2.0)) < 1e-10


def test_f_of_energy_is_even_in_lambda():
    # f(lambda^2) = (phi_hat(lambda) + phi_hat(-lambda))/2 is real and even.
    f = make_bump(1.5, 0.5)
    for lam in (0.3, 1.1, 4.0):
        val = f.f_of_energy(lam * lam)
        assert isinstance(val, float)
        ref = 0.5 * (f.fourier(lam) + f.fourier(-lam))
        assert abs(val - ref.real) < 1e-14
        assert abs(ref.imag) < 1e-12


def test_f_of_energy_negative_argument_grows():
    # Continuation to mu < 0 turns oscillation into exponential growth:
    # f(-s^2) = cosh moment of phi.
    f = make_bump(1.5, 0.5)
    assert f.f_of_energy(-1.0) > f.f_of_energy(0.0) > 0.0


def test_f_of_energy_decay_envelope():
    # A bump transform decays only like exp(-c sqrt(lambda)) (and
    # oscillates), so compare envelope maxima over whole lambda windows.
    f = make_bump(1.5, 0.5)

    def envelope(lo, hi):
        return max(abs(f.f_of_energy(lam * lam))
                   for lam in np.linspace(lo, hi, 40))

    e1 = envelope(20.0, 40.0)
    e2 = envelope(150.0, 170.0)
    assert e2 < 0.1 * e1
    assert e2 < 1e-4


def test_lhs_trace_zero_for_zero_potential():
    from wavetrace.potentials import make_zero_potential
    f = make_bump(1.5, 0.5)
    grid = Grid(half_width=8.0, points=400)
    assert lhs_trace(f, make_zero_potential(), grid) == pytest.approx(0.0,
                                                                      abs=1e-14)


def test_lhs_trace_grid_stability():
    # The spectral side must be converged in the grid at the tolerance the
    # acceptance criterion uses.
    f = make_bump(1.5, 0.5)
    pot = make_poschl_teller(1.0)
    a = lhs_trace(f, pot, Grid(half_width=10.0, points=600))
    b = lhs_trace(f, pot, Grid(half_width=12.0, points=900))
    assert abs(a - b) <= 5e-4 * max(abs(b), 1e-6)


def test_rhs_eigenvalue_and_zero_resonance_terms():
    # With no phase integral to speak of (lambda_max tiny), the eigenvalue
    # and m_R(0) bookkeeping is exposed directly.
    f = make_bump(1.5, 0.5)
    pot = make_poschl_teller(1.0)
    base = rhs_bk(f, pot, lambda_max=1e-3)
    with_ev = rhs_bk(f, pot, lambda_max=1e-3, eigenvalues=(-1.0,))
    assert with_ev - base == pytest.approx(f.f_of_energy(-1.0), rel=1e-12)
    with_mr = rhs_bk(f, pot, lambda_max=1e-3, m_R0=2)
    assert with_mr - base == pytest.approx(f.f_of_energy(0.0), rel=1e-10)
