"""Potential models with exponentially decaying tails.

A potential here is a pointwise evaluator V(x) together with two
asymptotic-tail descriptors: beyond the match points the potential equals a
convergent power series in w = exp(-A_plus * x) (right side) or
w = exp(A_minus * x) (left side), with no constant term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "AsymptoticTail",
    "Potential",
    "TailFitError",
    "make_poschl_teller",
    "make_zero_potential",
    "make_sech2",
    "fit_tail_coefficients",
]


class TailFitError(RuntimeError):
    """Tail least-squares system too ill-conditioned to trust."""


@dataclass(frozen=True)
class AsymptoticTail:
    """One-sided exponential tail V(x) = sum_j V_j w^j, w = exp(-+ A x)."""

    side: str                      # "plus" or "minus"
    decay_rate: float              # A > 0
    coefficients: tuple            # V_1 .. V_J
    fit_radius: float              # |w| below which the series is trusted
    match_point: float             # |x| beyond which the series is used
    coeff_bound: float = 1.0       # A_c with |V_j| <= A_c^j
    residual: float = 0.0          # recorded max relative fit residual

    def __post_init__(self):
        if self.decay_rate <= 0:
            raise ValueError("tail decay rate must be positive")
        if self.side not in ("plus", "minus"):
            raise ValueError(f"side must be 'plus' or 'minus', got {self.side!r}")

    def w_of_x(self, x: float) -> float:
        if self.side == "plus":
            return math.exp(-self.decay_rate * x)
        return math.exp(self.decay_rate * x)

    def series(self, w: complex) -> complex:
        """Evaluate the tail series at w (no constant term)."""
        acc = 0.0
        for vj in reversed(self.coefficients):
            acc = w * (vj + acc)
        return acc


@dataclass(frozen=True)
class Potential:
    """Real potential with recorded exponential tails on both sides."""

    name: str
    evaluate: Callable[[float], float]
    tail_plus: AsymptoticTail
    tail_minus: AsymptoticTail
    params: dict = field(default_factory=dict)

    def tail(self, side: str) -> AsymptoticTail:
        if side == "plus":
            return self.tail_plus
        if side == "minus":
            return self.tail_minus
        raise ValueError(f"side must be 'plus' or 'minus', got {side!r}")

    def __call__(self, x: float) -> float:
        return self.evaluate(x)


def _sech2_tail_coefficients(strength: float, nterms: int) -> tuple:
    # sech^2(x) = 4 sum_{k>=1} (-1)^(k-1) k e^(-2k|x|), so the tail of
    # strength/cosh^2 in w = e^(-2|x|) has V_k = 4 (-1)^(k-1) k strength.
    return tuple(4.0 * (-1.0) ** (k - 1) * k * strength for k in range(1, nterms + 1))


def _sech2_match_point(strength: float, coeffs: tuple) -> float:
    # Smallest x where the J-term series reproduces V to 1e-9 relative.
    # The series alternates, so the truncation error is below the first
    # dropped term; scan outward on a coarse grid and refine.
    if strength == 0.0:
        return 1.0
    J = len(coeffs)

    def rel_err(x):
        w = math.exp(-2.0 * x)
        v_true = strength / math.cosh(x) ** 2
        acc = 0.0
        for vj in reversed(coeffs):
            acc = w * (vj + acc)
        return abs(acc - v_true) / abs(v_true)

    x = 0.25
    while rel_err(x) > 1e-9 and x < 20.0:
        x += 0.05
    return x


def make_sech2(strength: float, name: str = "sech2", nterms: int = 32) -> Potential:
    """Potential strength/cosh^2(x) with its exact exponential-tail series."""
    coeffs = _sech2_tail_coefficients(strength, nterms)
    match = _sech2_match_point(strength, coeffs)
    coeff_bound = max((abs(c) ** (1.0 / (k + 1)) for k, c in enumerate(coeffs)),
                      default=1.0)
    tails = {}
    for side in ("plus", "minus"):
        tails[side] = AsymptoticTail(
            side=side,
            decay_rate=2.0,
            coefficients=coeffs,
            fit_radius=0.3,
            match_point=match,
            coeff_bound=coeff_bound,
        )

    def evaluate(x: float) -> float:
        return strength / math.cosh(x) ** 2

    return Potential(name=name, evaluate=evaluate,
                     tail_plus=tails["plus"], tail_minus=tails["minus"],
                     params={"strength": strength})


def make_poschl_teller(ell: float) -> Potential:
    """Poschl-Teller potential (ell^2 + 1/4)/cosh^2(x)."""
    if ell < 0:
        raise ValueError("ell must be nonnegative")
    strength = ell * ell + 0.25
    pot = make_sech2(strength, name="poschl_teller")
    return Potential(name=pot.name, evaluate=pot.evaluate,
                     tail_plus=pot.tail_plus, tail_minus=pot.tail_minus,
                     params={"ell": ell, "strength": strength})


def make_zero_potential(decay_rate: float = 2.0) -> Potential:
    """Zero potential with formal tails, used as the free reference."""
    tails = {
        side: AsymptoticTail(side=side, decay_rate=decay_rate, coefficients=(),
                             fit_radius=0.5, match_point=1.0, coeff_bound=1.0)
        for side in ("plus", "minus")
    }
    return Potential(name="zero", evaluate=lambda x: 0.0,
                     tail_plus=tails["plus"], tail_minus=tails["minus"])


def fit_tail_coefficients(pot_evaluator: Callable[[float], float],
                          side: str,
                          A: float,
                          J: int,
                          grid: Sequence[float],
                          cond_limit: float = 1e12):
    """Least-squares fit of V on `grid` against powers of w = exp(-+ A x).

    Returns (coefficients, max_relative_residual).  The design matrix is
    column-scaled before solving; the conditioning check applies to the
    scaled normal system.
    """
    if J < 1:
        raise ValueError("J must be >= 1")
    if A <= 0:
        raise ValueError("decay rate must be positive")
    x = np.asarray(grid, dtype=float)
    if side == "plus":
        w = np.exp(-A * x)
    elif side == "minus":
        w = np.exp(A * x)
    else:
        raise ValueError(f"side must be 'plus' or 'minus', got {side!r}")

    V = np.array([pot_evaluator(xi) for xi in x], dtype=float)
    design = np.column_stack([w ** j for j in range(1, J + 1)])
    scale = np.linalg.norm(design, axis=0)
    scale[scale == 0.0] = 1.0
    scaled = design / scale
    cond = np.linalg.cond(scaled.T @ scaled)
    if cond > cond_limit:
        raise TailFitError(
            f"tail fit normal system condition {cond:.3e} exceeds {cond_limit:.0e}; "
            "move the grid inward or reduce J")
    sol, *_ = np.linalg.lstsq(scaled, V, rcond=None)
    coeffs = sol / scale

    fitted = design @ coeffs
    denom = np.maximum(np.abs(V), 1e-300)
    if np.all(V == 0.0):
        residual = 0.0
        coeffs = np.zeros(J)
    else:
        residual = float(np.max(np.abs(fitted - V) / denom))
    return tuple(float(c) for c in coeffs), residual
