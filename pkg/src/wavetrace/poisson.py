"""Analytic (right-hand) side of the resonance Poisson formula.

For t > 0 the flat trace equals

    (1/2) sum_j m_j exp(-i lambda_j t) - 1/(2 (exp(t A_+ / 2) - 1))
                                       - 1/(2 (exp(t A_- / 2) - 1)) - 1/2,

where the sum runs over resonances with multiplicity.  The sum converges
absolutely for each fixed t > 0 because the resonances recede into the lower
half plane; truncation to |lambda_j| <= R leaves an exponentially small tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .resonances import ZeroResult
from .trace import TraceCurve

__all__ = ["PoissonConfig", "GridMismatchError", "renormalization_term",
           "resonance_sum", "poisson_rhs", "compare_curves",
           "poschl_teller_lattice"]


class GridMismatchError(ValueError):
    """compare_curves requires identical time grids."""


@dataclass(frozen=True)
class PoissonConfig:
    truncation_radius: float
    resonances: Sequence
    A_plus: float
    A_minus: float
    times: Sequence[float]
    m_R0: int = 0                  # multiplicity of a resonance at lambda = 0


def renormalization_term(A: float, t: float) -> float:
    """The false-pole renormalization -1/(2 (exp(t A / 2) - 1))."""
    if t <= 0:
        raise ValueError("renormalization term defined for t > 0 only")
    if A <= 0:
        raise ValueError("decay rate must be positive")
    return -0.5 / math.expm1(0.5 * t * A)


def _as_pairs(resonances):
    """Normalize input to (lambda, multiplicity) pairs."""
    pairs = []
    for z in resonances:
        if isinstance(z, ZeroResult):
            pairs.append((z.lam, z.multiplicity))
        elif isinstance(z, tuple):
            pairs.append((complex(z[0]), int(z[1])))
        else:
            pairs.append((complex(z), 1))
    return pairs


def resonance_sum(resonances, R: float, t: float) -> complex:
    """(1/2) sum over |lambda_j| <= R of m_j exp(-i lambda_j t).

    The imaginary part is a diagnostic: it vanishes when the input list is
    closed under lambda -> -conj(lambda).
    """
    if t <= 0:
        raise ValueError("resonance sum defined for t > 0 only")
    total = 0.0 + 0.0j
    for lam, mult in _as_pairs(resonances):
        if abs(lam) <= R:
            total += mult * np.exp(-1j * lam * t)
    return 0.5 * total


def poisson_rhs(config: PoissonConfig) -> TraceCurve:
    """Assemble the analytic trace curve from a resonance list."""
    times = np.asarray(config.times, dtype=float)
    values = np.empty_like(times)
    max_imag = 0.0
    for i, t in enumerate(times):
        s = resonance_sum(config.resonances, config.truncation_radius, t)
        max_imag = max(max_imag, abs(s.imag))
        values[i] = (s.real
                     + renormalization_term(config.A_plus, t)
                     + renormalization_term(config.A_minus, t)
                     + 0.5 * (config.m_R0 - 1))
    curve = TraceCurve(times=times, values=values, meta="poisson_rhs",
                       extra={"R": config.truncation_radius,
                              "max_imag_diagnostic": max_imag})
    scale = float(np.max(np.abs(values))) if len(values) else 0.0
    if scale > 0 and max_imag > 1e-6 * scale:
        curve.extra["symmetry_warning"] = (
            f"resonance sum imaginary part {max_imag:.3e} exceeds 1e-6 of peak "
            f"{scale:.3e}; input list may not be conjugate-symmetric")
    return curve


def compare_curves(a: TraceCurve, b: TraceCurve) -> dict:
    """Max absolute/relative error report between two curves on the same grid."""
    if len(a.times) != len(b.times) or not np.allclose(a.times, b.times,
                                                       rtol=0, atol=0):
        raise GridMismatchError("curves are sampled on different time grids")
    diff = np.abs(a.values - b.values)
    denom = np.maximum(np.abs(b.values), 0.05)
    rel = diff / denom
    i_abs = int(np.argmax(diff))
    i_rel = int(np.argmax(rel))
    return {
        "max_abs_error": float(diff[i_abs]),
        "t_max_abs_error": float(a.times[i_abs]),
        "max_rel_error": float(rel[i_rel]),
        "t_max_rel_error": float(a.times[i_rel]),
    }


def poschl_teller_lattice(ell: float, R: float):
    """Analytic Poschl-Teller resonance lattice -i(j+1/2) +- ell within |lambda| <= R."""
    out = []
    j = 0
    while j + 0.5 <= R:
        for sign in (1.0, -1.0):
            if ell == 0 and sign < 0:
                continue
            lam = complex(sign * ell, -(j + 0.5))
            if abs(lam) <= R:
                out.append((lam, 2 if ell == 0 else 1))
        j += 1
    return out
