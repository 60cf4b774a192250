"""Numerical flat trace of the regularized wave propagator.

The operator D_x^2 + V is discretized on a symmetric interval with Dirichlet
ends by the standard second-order stencil; the trace of

    cos(t sqrt(P_V)) - cos(t sqrt(P_0))

is either the exact spectral sum of the two discretized propagators
("spectral" mode) or the Gaussian-probe diagonal-kernel sum
("kernel_diagonal" mode), which mollifies each diagonal entry with a
normalized Gaussian and serves as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .potentials import Potential, make_zero_potential

__all__ = ["Grid", "TridiagonalOperator", "SpectralDecomposition", "TraceCurve",
           "PropagationWindowError", "discretize", "eigendecompose",
           "flat_trace_difference", "pt_closed_form"]


class PropagationWindowError(ValueError):
    """Requested times reach the Dirichlet walls (finite propagation speed)."""


@dataclass(frozen=True)
class Grid:
    half_width: float
    points: int

    def __post_init__(self):
        if self.points < 3:
            raise ValueError("need at least 3 interior points")
        if self.half_width <= 0:
            raise ValueError("half_width must be positive")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / (self.points + 1)

    @property
    def nodes(self) -> np.ndarray:
        h = self.spacing
        return -self.half_width + h * np.arange(1, self.points + 1)


@dataclass(frozen=True)
class TridiagonalOperator:
    diagonal: np.ndarray
    offdiagonal: np.ndarray


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray        # ascending
    eigenvectors: np.ndarray       # columns, orthonormal


@dataclass(frozen=True)
class TraceCurve:
    times: np.ndarray
    values: np.ndarray
    meta: str = ""
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if np.any(t <= 0) or np.any(np.diff(t) <= 0):
            raise ValueError("times must be strictly increasing and positive")


def discretize(pot: Potential, grid: Grid) -> TridiagonalOperator:
    """Second-order Dirichlet discretization of D_x^2 + V on the grid."""
    h = grid.spacing
    x = grid.nodes
    diag = 2.0 / h ** 2 + np.array([pot.evaluate(xi) for xi in x])
    off = np.full(grid.points - 1, -1.0 / h ** 2)
    return TridiagonalOperator(diagonal=diag, offdiagonal=off)


def eigendecompose(op: TridiagonalOperator) -> SpectralDecomposition:
    """Full symmetric-tridiagonal eigendecomposition (ascending eigenvalues)."""
    vals, vecs = eigh_tridiagonal(op.diagonal, op.offdiagonal)
    return SpectralDecomposition(eigenvalues=vals, eigenvectors=vecs)


def _cosine_factor(t: float, mu: np.ndarray) -> np.ndarray:
    """cos(t sqrt(mu)), analytically continued to cosh for mu < 0."""
    out = np.empty_like(mu)
    pos = mu >= 0
    out[pos] = np.cos(t * np.sqrt(mu[pos]))
    out[~pos] = np.cosh(t * np.sqrt(-mu[~pos]))
    return out


def flat_trace_difference(pot: Potential, grid: Grid, times,
                          mode: str = "spectral",
                          sigma: float | None = None) -> TraceCurve:
    """Flat trace of the propagator difference at the given positive times."""
    times = np.asarray(times, dtype=float)
    if np.any(times <= 0):
        raise PropagationWindowError("times must be positive")
    sigma = 2.0 * grid.spacing if sigma is None else sigma
    support_radius = 4.0 * sigma if mode == "kernel_diagonal" else 0.0
    if np.max(times) >= 2.0 * grid.half_width - 2.0 * support_radius:
        raise PropagationWindowError(
            f"t_max={np.max(times)} reaches the Dirichlet walls for "
            f"L={grid.half_width}")

    free = make_zero_potential()
    dec_v = eigendecompose(discretize(pot, grid))
    dec_0 = eigendecompose(discretize(free, grid))

    if mode == "spectral":
        # The second-order stencil's spectrum is a band [0, 4/h^2] whose
        # upper half mirrors the lower half of the sign-flipped-potential
        # operator (conjugate by (-1)^i), so modes up there carry a coherent
        # image artifact that does not shrink with N.  A smooth spectral
        # mollifier centered well below the band top removes it while
        # leaving the resolved modes untouched to ~1e-12.
        mu_c = 1.0 / grid.spacing ** 2
        w_v = np.exp(-((np.abs(dec_v.eigenvalues) / mu_c) ** 4))
        w_0 = np.exp(-((np.abs(dec_0.eigenvalues) / mu_c) ** 4))
        values = np.array([
            float(np.dot(w_v, _cosine_factor(t, dec_v.eigenvalues))
                  - np.dot(w_0, _cosine_factor(t, dec_0.eigenvalues)))
            for t in times
        ])
        return TraceCurve(times=times, values=values, meta="numeric",
                          extra={"mode": "spectral", "L": grid.half_width,
                                 "N": grid.points, "band_cut": mu_c})
    if mode != "kernel_diagonal":
        raise ValueError(f"unknown mode {mode!r}")

    # Gaussian probes g_i centered at each node; the trace estimate is
    #   sum_i h [cos(t sqrt(A_V)) g_i - cos(t sqrt(A_0)) g_i](x_i)
    # = sum_k c(t, mu_k) * weight_k  with  weight_k = h sum_i Q_ik (Q^T G)_ki.
    x = grid.nodes
    h = grid.spacing
    G = np.exp(-0.5 * ((x[:, None] - x[None, :]) / sigma) ** 2)
    G /= (sigma * math.sqrt(2.0 * math.pi))

    def weights(dec: SpectralDecomposition) -> np.ndarray:
        W = dec.eigenvectors.T @ G
        return h * np.einsum("ik,ki->k", dec.eigenvectors, W)

    wv = weights(dec_v)
    w0 = weights(dec_0)
    values = np.array([
        float(np.dot(_cosine_factor(t, dec_v.eigenvalues), wv)
              - np.dot(_cosine_factor(t, dec_0.eigenvalues), w0))
        for t in times
    ])
    return TraceCurve(times=times, values=values, meta="numeric",
                      extra={"mode": "kernel_diagonal", "sigma": sigma,
                             "L": grid.half_width, "N": grid.points})


def pt_closed_form(ell: float, times) -> TraceCurve:
    """Closed-form Poschl-Teller flat trace:
    (1/2) ((cos(ell t) - exp(-t/2)) / sinh(t/2) - 1)."""
    times = np.asarray(times, dtype=float)
    if np.any(times <= 0):
        raise ValueError("times must be positive")
    values = 0.5 * ((np.cos(ell * times) - np.exp(-times / 2.0))
                    / np.sinh(times / 2.0) - 1.0)
    return TraceCurve(times=times, values=values, meta="pt_closed_form",
                      extra={"ell": ell})
