"""Wronskian, transmission coefficient, scattering determinant, and the
scattering-phase derivative with its three-term decomposition.

The central object is F(lambda), the Wronskian of the two outgoing
solutions.  It is entire, x-independent, and its zeros are the resonances
(lower half plane) and bound states (positive imaginary axis).  The
transmission coefficient is

    T(lambda) = 2 i lambda / (Gamma(1-alpha_+) Gamma(1-alpha_-) F(lambda)),

with alpha_pm = 2 i lambda / A_pm, and det S(lambda) = T(lambda)/T(-lambda)
on the real axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .jost import build_outgoing
from .potentials import Potential
from .special_functions import digamma, reciprocal_gamma

__all__ = ["ScatteringPoint", "ResonanceDivisionError", "BranchTrackingError",
           "wronskian", "transmission", "det_s", "phase_derivative"]

# 4th-order central-difference stencil for d/dlambda.
_D1_STENCIL = ((-2, 1.0 / 12.0), (-1, -8.0 / 12.0), (1, 8.0 / 12.0), (2, -1.0 / 12.0))


class ResonanceDivisionError(ZeroDivisionError):
    """|F(lambda)| vanishes to working precision: lambda is a resonance."""


class BranchTrackingError(RuntimeError):
    """Phase samples jumped too much for reliable unwrapping."""


@dataclass
class ScatteringPoint:
    lam: complex
    F: complex
    T: complex | None = None
    detS: complex | None = None
    G_total: complex | None = None
    G_gamma_plus: complex | None = None
    G_gamma_minus: complex | None = None
    G_F: complex | None = None


def wronskian(pot: Potential, lam: complex, x_star: float | None = None,
              rtol: float = 1e-10, atol: float = 1e-12) -> complex:
    """F(lambda) = u_+' u_-  -  u_+ u_-' evaluated at x_star.

    F is x-independent; by default x_star is the midpoint between the two
    series seams, which balances the two backward-integration spans (the
    dominant error source in the lower half plane grows with span).
    """
    if x_star is None:
        x_star = 0.5 * (pot.tail_plus.match_point - pot.tail_minus.match_point)
    up = build_outgoing(pot, lam, "plus", rtol=rtol, atol=atol)
    um = build_outgoing(pot, lam, "minus", rtol=rtol, atol=atol)
    u1, du1 = up.evaluate(x_star)
    u2, du2 = um.evaluate(x_star)
    return du1 * u2 - u1 * du2


def transmission(pot: Potential, lam: complex, x_star: float = 0.0,
                 F: complex | None = None, **kwargs) -> complex:
    """Transmission coefficient from the Wronskian and the Gamma factors."""
    if F is None:
        F = wronskian(pot, lam, x_star=x_star, **kwargs)
    Ap = pot.tail_plus.decay_rate
    Am = pot.tail_minus.decay_rate
    numerator = (2j * lam * reciprocal_gamma(1.0 - 2j * lam / Ap)
                 * reciprocal_gamma(1.0 - 2j * lam / Am))
    # |F| at a true resonance bottoms out at the tail-series accuracy
    # (~1e-9 of its natural scale), not at machine epsilon; compare against
    # the free normalization, which is what F equals when T = 1.
    if abs(F) < 1e-8 * max(abs(numerator), 1e-300):
        raise ResonanceDivisionError(
            f"F({lam}) = {F}: lambda is (numerically) a resonance")
    return numerator / F


def det_s(pot: Potential, lam: float, **kwargs) -> complex:
    """det S(lambda) = T(lambda)/T(-lambda) for real lambda != 0."""
    if lam == 0.0:
        raise ValueError("det S is evaluated for real lambda != 0")
    return transmission(pot, lam, **kwargs) / transmission(pot, -lam, **kwargs)


def _dF_over_F(pot: Potential, lam: float, h: float, **kwargs) -> complex:
    F0 = wronskian(pot, lam, **kwargs)
    if F0 == 0:
        raise ResonanceDivisionError(f"F({lam}) = 0")
    dF = sum(c * wronskian(pot, lam + k * h, **kwargs) for k, c in _D1_STENCIL) / h
    return dF / F0


def phase_derivative(pot: Potential, lam: float, mode: str = "decomposed",
                     rtol: float = 1e-10, atol: float = 1e-12) -> ScatteringPoint:
    """Scattering-phase derivative G(lambda) = d/dlambda log det S(lambda).

    mode="decomposed" assembles G = G_Gamma^+ + G_Gamma^- + G_F where

        G_Gamma^pm = 2 i / A_pm * (psi(1 + alpha_pm) + psi(1 - alpha_pm))
        G_F        = d/dlambda (log F(-lambda) - log F(lambda))
                   = -F'(-lambda)/F(-lambda) - F'(lambda)/F(lambda),

    and mode="direct" differentiates the unwrapped phase of det S on a
    5-point stencil.
    """
    if lam == 0.0:
        raise ValueError("phase derivative undefined at lambda = 0")
    kwargs = {"rtol": rtol, "atol": atol}
    h = 1e-4 * max(1.0, abs(lam))
    point = ScatteringPoint(lam=lam, F=wronskian(pot, lam, **kwargs))
    if mode == "decomposed":
        Ap = pot.tail_plus.decay_rate
        Am = pot.tail_minus.decay_rate
        ap = 2j * lam / Ap
        am = 2j * lam / Am
        point.G_gamma_plus = (2j / Ap) * (digamma(1.0 + ap) + digamma(1.0 - ap))
        point.G_gamma_minus = (2j / Am) * (digamma(1.0 + am) + digamma(1.0 - am))
        # For real lambda and real V, F(-mu) = conj(F(mu)), so the stencil
        # around -lambda reuses the same five evaluations mirrored.
        vals = {k: (point.F if k == 0 else wronskian(pot, lam + k * h, **kwargs))
                for k in (-2, -1, 0, 1, 2)}
        if vals[0] == 0:
            raise ResonanceDivisionError(f"F({lam}) = 0")
        dF = sum(c * vals[k] for k, c in _D1_STENCIL) / h
        dF_neg = sum(c * np.conj(vals[-k]) for k, c in _D1_STENCIL) / h
        point.G_F = -dF_neg / np.conj(vals[0]) - dF / vals[0]
        point.G_total = point.G_gamma_plus + point.G_gamma_minus + point.G_F
        return point
    if mode != "direct":
        raise ValueError(f"unknown mode {mode!r}")
    offsets = [k for k, _ in _D1_STENCIL] + [0]
    offsets.sort()
    vals = {k: det_s(pot, lam + k * h, **kwargs) for k in offsets}
    phases = np.unwrap([np.angle(vals[k]) for k in offsets])
    if np.max(np.abs(np.diff(phases))) > 0.5 * math.pi:
        raise BranchTrackingError(
            f"phase increment > pi/2 on the stencil at lambda={lam}; reduce h")
    by_offset = dict(zip(offsets, phases))
    dtheta = sum(c * by_offset[k] for k, c in _D1_STENCIL) / h
    dlogmod = sum(c * math.log(abs(vals[k])) for k, c in _D1_STENCIL) / h
    point.detS = vals[0]
    point.G_total = dlogmod + 1j * dtheta
    return point
