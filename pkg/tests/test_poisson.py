"""Analytic side of the resonance trace formula."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wavetrace.poisson import (GridMismatchError, PoissonConfig,
                               compare_curves, poisson_rhs,
                               poschl_teller_lattice, renormalization_term,
                               resonance_sum)
from wavetrace.trace import TraceCurve, pt_closed_form


def test_renormalization_term_value():
    # -1/(2 (e^{tA/2} - 1)) at t = 1, A = 2 is -1/(2(e - 1)).
    assert renormalization_term(2.0, 1.0) == pytest.approx(
        -0.5 / (math.e - 1.0), rel=1e-15)
    with pytest.raises(ValueError):
        renormalization_term(2.0, 0.0)
    with pytest.raises(ValueError):
        renormalization_term(-1.0, 1.0)


def test_lattice_contents():
    lat = poschl_teller_lattice(1.0, 2.0)
    # |+-1 - i(j+1/2)| <= 2 for j = 0 (sqrt(1.25)) and j = 1 (sqrt(3.25)).
    assert len(lat) == 4
    assert all(m == 1 for _, m in lat)
    lams = sorted(lat, key=lambda p: (p[0].real, p[0].imag))
    assert lams[0][0] == -1.0 - 1.5j


def test_lattice_ell_zero_multiplicity():
    lat = poschl_teller_lattice(0.0, 3.0)
    assert all(lam.real == 0.0 and m == 2 for lam, m in lat)
    assert len(lat) == 3   # j = 0, 1, 2


def test_resonance_sum_symmetry_real():
    lat = poschl_teller_lattice(1.0, 40.0)
    s = resonance_sum(lat, 40.0, 1.3)
    assert abs(s.imag) < 1e-12 * max(abs(s.real), 1.0)
    with pytest.raises(ValueError):
        resonance_sum(lat, 40.0, 0.0)


def test_resonance_sum_accepts_mixed_inputs():
    pairs = [(1.0 - 0.5j, 1), (-1.0 - 0.5j, 1)]
    plain = [1.0 - 0.5j, -1.0 - 0.5j]
    t = 0.9
    assert resonance_sum(pairs, 10.0, t) == resonance_sum(plain, 10.0, t)


def test_poisson_rhs_matches_closed_form():
    # Desk-scale version of the exact identity (acceptance runs R = 40).
    times = np.linspace(0.5, 3.0, 26)
    cfg = PoissonConfig(truncation_radius=40.0,
                        resonances=poschl_teller_lattice(1.0, 40.0),
                        A_plus=2.0, A_minus=2.0, times=times)
    rhs = poisson_rhs(cfg)
    exact = pt_closed_form(1.0, times)
    assert np.max(np.abs(rhs.values - exact.values)) < 1e-6


def test_truncation_error_shrinks_with_radius():
    times = np.linspace(0.5, 2.0, 8)
    exact = pt_closed_form(1.0, times).values
    errs = []
    for R in (5.0, 10.0, 20.0):
        cfg = PoissonConfig(truncation_radius=R,
                            resonances=poschl_teller_lattice(1.0, R),
                            A_plus=2.0, A_minus=2.0, times=times)
        errs.append(np.max(np.abs(poisson_rhs(cfg).values - exact)))
    assert errs[0] > errs[1] > errs[2]


def test_symmetry_warning_for_asymmetric_input():
    times = np.linspace(0.5, 2.0, 5)
    cfg = PoissonConfig(truncation_radius=10.0,
                        resonances=[(1.0 - 0.5j, 1)],   # missing the mirror
                        A_plus=2.0, A_minus=2.0, times=times)
    curve = poisson_rhs(cfg)
    assert "symmetry_warning" in curve.extra


def test_compare_curves():
    t = np.linspace(1.0, 2.0, 5)
    a = TraceCurve(times=t, values=np.ones(5))
    b = TraceCurve(times=t, values=np.ones(5) * 1.1)
    rep = compare_curves(a, b)
    assert rep["max_abs_error"] == pytest.approx(0.1)
    assert rep["max_rel_error"] == pytest.approx(0.1 / 1.1)
    with pytest.raises(GridMismatchError):
        compare_curves(a, TraceCurve(times=t + 0.1, values=np.ones(5)))


@given(st.floats(min_value=0.3, max_value=4.0),
       st.floats(min_value=0.5, max_value=3.0))
@settings(max_examples=50, deadline=None)
def test_renormalization_matches_geometric_series(A, t):
    # -1/(2(e^{tA/2}-1)) = -(1/2) sum_{k>=1} e^{-k t A / 2}.
    series = -0.5 * sum(math.exp(-k * t * A / 2.0) for k in range(1, 400))
    assert renormalization_term(A, t) == pytest.approx(series, rel=1e-10)
