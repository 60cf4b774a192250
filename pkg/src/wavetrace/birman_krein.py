"""Numerical check of the Birman-Krein identity.

For a smooth bump phi supported in (0, infinity) and
f(lambda^2) = (phi_hat(lambda) + phi_hat(-lambda)) / 2,

    tr(f(P_V) - f(P_0)) = (1/(2 pi i)) int_0^inf f(lambda^2) G(lambda) dlambda
                          + sum_j f(E_j) + (m_R(0) - 1)/2 * f(0),

where G is the scattering-phase derivative, E_j the negative eigenvalues,
and m_R(0) the multiplicity of a zero resonance.  The left side is computed
from the tridiagonal spectral decompositions, keeping the two routes
independent.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .potentials import Potential
from .scattering import phase_derivative
from .trace import Grid, discretize, eigendecompose

__all__ = ["TestFunction", "BumpSupportError", "make_bump", "lhs_trace",
           "rhs_bk", "TailTruncationWarning"]


class BumpSupportError(ValueError):
    """Bump support must lie strictly inside (0, infinity)."""


class TailTruncationWarning(UserWarning):
    """The phase integral was cut where the integrand was not yet negligible."""


_GL_ORDER = 512


@dataclass(frozen=True)
class TestFunction:
    center: float
    width: float
    _norm: float
    _nodes: np.ndarray
    _weights: np.ndarray
    _values: np.ndarray

    def __call__(self, t: float) -> float:
        s = (t - self.center) / self.width
        if abs(s) >= 1.0:
            return 0.0
        return math.exp(-1.0 / (1.0 - s * s)) / self._norm

    def fourier(self, lam: complex, order: int = _GL_ORDER) -> complex:
        """phi_hat(lambda) = int e^{i lambda t} phi(t) dt by Gauss-Legendre."""
        if order == _GL_ORDER:
            nodes, weights, vals = self._nodes, self._weights, self._values
        else:
            nodes, weights = _bump_quadrature(self.center, self.width, order)
            vals = np.array([self(t) for t in nodes])
        phases = np.exp(1j * complex(lam) * nodes)
        return complex(np.sum(weights * phases * vals))

    def f_of_energy(self, mu: float) -> float:
        """f(mu) = (phi_hat(s) + phi_hat(-s))/2 with s = sqrt(mu) continued
        to i sqrt(-mu) for mu < 0."""
        s = cmath.sqrt(mu) if mu >= 0 else 1j * math.sqrt(-mu)
        val = 0.5 * (self.fourier(s) + self.fourier(-s))
        return float(val.real)


def _bump_quadrature(t0: float, width: float, order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    nodes = t0 + width * x
    weights = width * w
    return nodes, weights


def make_bump(t0: float, width: float) -> TestFunction:
    """Normalized C-infinity bump supported in (t0 - width, t0 + width)."""
    if t0 <= width:
        raise BumpSupportError(f"need t0 > width > 0, got t0={t0}, width={width}")
    if width <= 0:
        raise BumpSupportError("width must be positive")
    nodes, weights = _bump_quadrature(t0, width, _GL_ORDER)
    raw = np.array([math.exp(-1.0 / (1.0 - ((t - t0) / width) ** 2))
                    if abs((t - t0) / width) < 1 else 0.0 for t in nodes])
    norm = float(np.sum(weights * raw))
    return TestFunction(center=t0, width=width, _norm=norm,
                        _nodes=nodes, _weights=weights, _values=raw / norm)


def lhs_trace(f: TestFunction, pot: Potential, grid: Grid) -> float:
    """Spectral side: sum_k f(mu_k^V) - f(mu_k^0) on the same grid."""
    from .potentials import make_zero_potential

    dec_v = eigendecompose(discretize(pot, grid))
    dec_0 = eigendecompose(discretize(make_zero_potential(), grid))
    # Vectorized over the (real) spectrum: f decays superpolynomially, so
    # truncate where both phi_hat factors are negligible.
    total = 0.0
    for mu_v, mu_0 in zip(dec_v.eigenvalues, dec_0.eigenvalues):
        total += f.f_of_energy(float(mu_v)) - f.f_of_energy(float(mu_0))
    return total


def rhs_bk(f: TestFunction, pot: Potential, lambda_max: float | None = None,
           eigenvalues=(), m_R0: int = 0,
           lambda_min: float = 1e-4, points_per_unit: float = 6.0,
           tail_threshold: float = 1e-7,
           rtol: float = 1e-9, atol: float = 1e-11) -> float:
    """Phase-integral side of the Birman-Krein identity.

    Integrates f(lambda^2) G(lambda) / (2 pi i) over (lambda_min, lambda_max]
    with Gauss-Legendre panels, then adds the eigenvalue and zero-resonance
    terms.  lambda_max defaults to the point where f has decayed below
    tail_threshold; a bump transform decays only like exp(-c sqrt(lambda)),
    so chasing much smaller thresholds inflates the integration range (and
    its cost) quadratically in log(1/threshold).
    """
    if lambda_max is None:
        lam = 1.0
        while abs(f.f_of_energy(lam * lam)) > tail_threshold and lam < 200.0:
            lam += 1.0
        lambda_max = lam

    def integrand(lam: float) -> float:
        G = phase_derivative(pot, lam, mode="decomposed",
                             rtol=rtol, atol=atol).G_total
        val = f.f_of_energy(lam * lam) * G / (2.0j * math.pi)
        return float(val.real)

    # Dense panels through the resonance region, coarser ones along the
    # smooth superexponentially-damped tail.
    elbow = min(16.0, lambda_max)
    n_dense = max(4, int(math.ceil((elbow - lambda_min) * points_per_unit / 8.0)))
    edges = list(np.linspace(lambda_min, elbow, n_dense + 1))
    while edges[-1] < lambda_max:
        edges.append(min(edges[-1] + 4.0, lambda_max))
    gl_x, gl_w = np.polynomial.legendre.leggauss(8)
    integral = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        integral += half * sum(w * integrand(mid + half * x)
                               for x, w in zip(gl_x, gl_w))

    tail = abs(integrand(lambda_max))
    if tail > 1e-4:
        warnings.warn(
            f"integrand still {tail:.2e} at lambda_max={lambda_max}",
            TailTruncationWarning)

    total = integral
    for E in eigenvalues:
        total += f.f_of_energy(float(E))
    total += 0.5 * (m_R0 - 1) * f.f_of_energy(0.0)
    return total
