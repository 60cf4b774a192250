"""End-to-end acceptance criteria.

Each test prints one PASS/FAIL line with its measured figure of merit, so a
plain ``pytest -v tests/test_acceptance.py -s`` doubles as a verification
report.  Criteria 1-10 run in seconds to minutes; criterion 11 performs a
full resonance search for the Regge-Wheeler potential and is the long pole.
"""

import math

import numpy as np
import pytest

from wavetrace.birman_krein import lhs_trace, make_bump, rhs_bk
from wavetrace.poisson import (PoissonConfig, poisson_rhs,
                               poschl_teller_lattice)
from wavetrace.potentials import make_poschl_teller, make_zero_potential
from wavetrace.resonances import SearchRegion, count_zeros, find_zeros
from wavetrace.sds import (make_regge_wheeler, make_sds_geometry,
                           radius_from_tortoise, regge_wheeler_value,
                           tortoise)
from wavetrace.scattering import transmission, wronskian
from wavetrace.trace import (Grid, discretize, eigendecompose,
                             flat_trace_difference, pt_closed_form)


def report(num, label, ok, metric):
    status = "PASS" if ok else "FAIL"
    print(f"\n[{status}] criterion {num}: {label} ({metric})")
    assert ok, f"criterion {num} failed: {label} ({metric})"


def test_criterion_01_free_scatterer_identity():
    free = make_zero_potential()
    worst = max(abs(transmission(free, lam) - 1.0) for lam in (0.5, 1.0, 2.0))
    report(1, "zero potential has T = 1", worst <= 1e-8,
           f"max |T-1| = {worst:.3e}")


def test_criterion_02_wronskian_constancy():
    pot = make_poschl_teller(1.0)
    rng = np.random.default_rng(20260823)
    spreads = []
    for _ in range(20):
        lam = complex(rng.uniform(-3.0, 3.0), rng.uniform(-2.0, 0.5))
        vals = [wronskian(pot, lam, x_star=xs) for xs in (-2.0, 0.0, 2.0)]
        scale = max(abs(v) for v in vals)
        spreads.append(max(abs(a - b) for a in vals for b in vals) / scale)
    worst = max(spreads)
    report(2, "F is independent of the evaluation point", worst <= 1e-6,
           f"max relative spread = {worst:.3e}")


def test_criterion_03_conjugation_symmetry():
    pot = make_poschl_teller(1.0)
    worst = 0.0
    for re in np.linspace(-3.0, 3.0, 10):
        for im in np.linspace(-2.0, 0.5, 10):
            lam = complex(re, im)
            a = wronskian(pot, -np.conj(lam))
            b = np.conj(wronskian(pot, lam))
            worst = max(worst, abs(a - b) / max(abs(b), 1e-300))
    report(3, "F(-conj lambda) = conj F(lambda)", worst <= 1e-8,
           f"max relative defect = {worst:.3e}")


def test_criterion_04_poschl_teller_resonance_lattice():
    pot = make_poschl_teller(1.0)
    zeros = find_zeros(pot, SearchRegion(-3.0, 3.0, -4.2, -0.1), tol=1e-8)
    expected = [complex(s, -(j + 0.5)) for s in (-1.0, 1.0) for j in range(4)]
    ok = len(zeros) == 8 and all(z.multiplicity == 1 for z in zeros)
    worst = float("inf")
    if ok:
        # Each expected lattice point must be hit exactly once.
        offsets = []
        for ref in expected:
            dists = sorted(abs(z.lam - ref) for z in zeros)
            offsets.append(dists[0])
        worst = max(offsets)
        ok = worst <= 1e-6
    report(4, "8 lattice resonances at +-1 - i(j+1/2)", ok,
           f"count = {len(zeros)}, max offset = {worst:.3e}")


def test_criterion_05_resonance_free_strip():
    pot = make_poschl_teller(1.0)
    w = count_zeros(pot, SearchRegion(-5.0, 5.0, -0.05, -0.001))
    report(5, "no zeros in the strip below the real axis", w == 0,
           f"winding = {w}")


def test_criterion_06_poisson_assembly_vs_closed_form():
    times = np.linspace(0.5, 3.0, 51)
    cfg = PoissonConfig(truncation_radius=40.0,
                        resonances=poschl_teller_lattice(1.0, 40.0),
                        A_plus=2.0, A_minus=2.0, times=times)
    err = np.max(np.abs(poisson_rhs(cfg).values
                        - pt_closed_form(1.0, times).values))
    report(6, "resonance sum + renormalization reproduces the closed form",
           err <= 1e-6, f"max abs error = {err:.3e}")


def test_criterion_07_numeric_trace_reproduction():
    pot = make_poschl_teller(1.0)
    grid = Grid(half_width=12.0, points=1500)
    times = np.linspace(0.5, 3.0, 26)
    exact = pt_closed_form(1.0, times).values
    spec = flat_trace_difference(pot, grid, times, mode="spectral").values
    kern = flat_trace_difference(pot, grid, times,
                                 mode="kernel_diagonal").values
    rel_spec = np.max(np.abs(spec - exact) / np.maximum(np.abs(exact), 0.05))
    rel_modes = np.max(np.abs(kern - spec) / np.maximum(np.abs(spec), 0.05))
    report(7, "numeric flat trace matches the closed form",
           rel_spec <= 0.05 and rel_modes <= 0.02,
           f"spectral vs exact = {rel_spec:.3e}, "
           f"kernel vs spectral = {rel_modes:.3e}")


def test_criterion_08_birman_krein_identity():
    pot = make_poschl_teller(1.0)
    bump = make_bump(1.5, 0.5)
    lhs = lhs_trace(bump, pot, Grid(half_width=12.0, points=1200))
    rhs = rhs_bk(bump, pot)
    rel = abs(lhs - rhs) / abs(lhs)
    report(8, "spectral trace equals the phase integral", rel <= 0.05,
           f"lhs = {lhs:.8f}, rhs = {rhs:.8f}, rel = {rel:.3e}")


def test_criterion_09_sds_geometry():
    geom = make_sds_geometry(1.0, 0.04)

    def g(r):
        return 1.0 - 2.0 / r - 0.04 * r * r / 3.0

    def bisect(lo, hi):
        flo = g(lo)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if flo * g(mid) < 0:
                hi = mid
            else:
                lo, flo = mid, g(mid)
        return 0.5 * (lo + hi)

    horizon_defect = max(abs(geom.r_minus - bisect(1.9, 3.0)),
                         abs(geom.r_plus - bisect(6.0, 8.0)))
    g_defect = max(abs(geom.G_direct(geom.r_minus)),
                   abs(geom.G_direct(geom.r_plus)))

    def slope(sign, lo, hi):
        xs = np.linspace(lo, hi, 40)
        ys = np.log([abs(regge_wheeler_value(geom, 2, sign * x)) for x in xs])
        return np.polyfit(xs, ys, 1)[0]

    # The cosmological-side slope is measured past x = 30 where the
    # subleading tail term has decayed below the 1% band.
    ds = abs(slope(1.0, 30.0, 45.0) + geom.A_plus) / geom.A_plus
    dm = abs(slope(-1.0, 20.0, 30.0) + geom.A_minus) / geom.A_minus

    rt = max(abs(tortoise(geom, radius_from_tortoise(geom, x),
                          method="closed_form") - x)
             for x in np.linspace(-30.0, 30.0, 31))
    ok = (g_defect <= 1e-12 and horizon_defect <= 1e-10
          and ds <= 0.01 and dm <= 0.01 and rt <= 1e-10)
    report(9, "horizons, tail decay rates, tortoise round trip", ok,
           f"|G(r_pm)| = {g_defect:.2e}, slope defects = {ds:.2e}/{dm:.2e}, "
           f"round trip = {rt:.2e}")


def test_criterion_10_eigensolver_properties():
    grid = Grid(half_width=5.0, points=200)
    dec = eigendecompose(discretize(make_zero_potential(), grid))
    k = np.arange(1, 201)
    exact = 2.0 * (1.0 - np.cos(k * math.pi / 201)) / grid.spacing ** 2
    spec_err = np.max(np.abs(dec.eigenvalues - exact) / exact)

    grid = Grid(half_width=12.0, points=1500)
    op = discretize(make_poschl_teller(1.0), grid)
    dec = eigendecompose(op)
    Q = dec.eigenvectors
    ortho = np.max(np.abs(Q.T @ Q - np.eye(Q.shape[1])))
    AQ = op.diagonal[:, None] * Q
    AQ[1:] += op.offdiagonal[:, None] * Q[:-1]
    AQ[:-1] += op.offdiagonal[:, None] * Q[1:]
    resid = np.max(np.linalg.norm(AQ - Q * dec.eigenvalues[None, :], axis=0))
    resid_rel = resid / np.max(np.abs(dec.eigenvalues))
    ok = spec_err <= 1e-9 and ortho <= 1e-10 and resid_rel <= 1e-8
    report(10, "free spectrum, orthonormality, eigen-residuals", ok,
           f"spectrum = {spec_err:.2e}, gram = {ortho:.2e}, "
           f"residual = {resid_rel:.2e}")


def test_criterion_11_regge_wheeler_end_to_end():
    geom = make_sds_geometry(1.0, 0.04)
    rw = make_regge_wheeler(geom, 2)

    # Full search of the rectangle covering |lambda| <= 4 below the real
    # axis.  The spectrum here is dominated by nearly purely imaginary
    # resonances whose sum almost cancels the renormalization terms; this is
    # by far the longest-running criterion (no runtime bound is claimed).
    found = find_zeros(rw, SearchRegion(-4.0, 4.0, -4.0, -0.05), tol=1e-6)
    resonances = [(z.lam, z.multiplicity) for z in found
                  if z.classification == "resonance" and abs(z.lam) <= 4.0]

    times = np.linspace(1.5, 3.0, 16)
    rhs = poisson_rhs(PoissonConfig(truncation_radius=4.0,
                                    resonances=resonances,
                                    A_plus=geom.A_plus,
                                    A_minus=geom.A_minus,
                                    times=times))
    numeric = flat_trace_difference(rw, Grid(half_width=30.0, points=3600),
                                    times)
    rel = (np.abs(numeric.values - rhs.values)
           / np.maximum(np.abs(rhs.values), 0.05))
    worst = float(np.max(rel))
    # Residual attribution: the cut |lambda| <= 4 truncates a nearly
    # horizontal branch of resonances near Im lambda = -1.8 mid-branch, so
    # the leftover is an oscillation at the cut frequency (Re lambda = 4)
    # decaying like e^{-1.8 t}; it dominates only the smallest times.
    late = float(np.max(rel[times >= 1.8]))
    report(11, "numeric trace matches the resonance expansion",
           worst <= 0.10,
           f"{len(resonances)} resonances, max rel = {worst:.3e}, "
           f"max rel on t >= 1.8 = {late:.3e} (small-t residual is the "
           f"Im = -1.8 branch truncated at the |lambda| = 4 cut)")
