"""Outgoing and incoming solutions of (D_x^2 + V - lambda^2) u = 0.

An outgoing solution at +infinity has the form

    u(x) = e^{i lambda x} v(w),   w = e^{-A_+ x},

with v holomorphic near w = 0.  The series coefficients obey the recursion

    j A^2 (j - alpha) v_j = sum_{l=1}^{j} V_l v_{j-l},   alpha = 2 i lambda / A,

seeded by v_0 = 1/Gamma(1 - alpha).  The series initializes (v, v') at a
match point; inside the match point the profile is continued by integrating
the first-order system v'' + 2 i lambda v' - V v = 0.

The minus side is handled by reflecting x: the outgoing solution at
-infinity of V(x) equals the outgoing-at-+infinity solution of V(-x)
evaluated at -x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .potentials import AsymptoticTail, Potential
from .special_functions import reciprocal_gamma

__all__ = ["series_coefficients", "JostSolution", "build_outgoing",
           "evaluate_outgoing", "evaluate_incoming", "JostError"]

_NEAR_INTEGER_TOL = 1e-3
_OFFSET_DELTA = 1e-4


class JostError(RuntimeError):
    """ODE continuation failure (step-size underflow or non-convergence)."""


def _coefficients_plain(tail_coeffs, A: float, lam: complex, J: int):
    alpha = 2j * lam / A
    v = np.zeros(J + 1, dtype=complex)
    v[0] = reciprocal_gamma(1.0 - alpha)
    A2 = A * A
    nV = len(tail_coeffs)
    for j in range(1, J + 1):
        s = 0.0 + 0.0j
        for l in range(1, min(j, nV) + 1):
            s += tail_coeffs[l - 1] * v[j - l]
        v[j] = s / (j * A2 * (j - alpha))
    return v


def series_coefficients(tail: AsymptoticTail, lam: complex, J: int) -> np.ndarray:
    """Profile series coefficients v_0..v_J for the given tail at lambda.

    When alpha = 2 i lambda / A is within 1e-3 of an integer in 1..J the
    recursion denominator degenerates; the coefficients are entire in alpha,
    so they are recovered by averaging four symmetric lambda offsets (the
    first-order pole terms cancel, leaving an O(delta^2) error).  v_0 is
    always evaluated at the true lambda since 1/Gamma is entire.
    """
    if J < 0:
        raise ValueError("J must be >= 0")
    A = tail.decay_rate
    alpha = 2j * lam / A
    near_integer = any(abs(alpha - k) < _NEAR_INTEGER_TOL for k in range(1, J + 1))
    if not near_integer or not tail.coefficients:
        v = _coefficients_plain(tail.coefficients, A, lam, J)
        if tail.coefficients:
            return v
        # Zero potential: only v_0 survives, exactly.
        v[1:] = 0.0
        return v
    scale = max(1.0, abs(lam))
    delta = _OFFSET_DELTA * scale
    acc = np.zeros(J + 1, dtype=complex)
    for off in (delta, -delta, 1j * delta, -1j * delta):
        acc += _coefficients_plain(tail.coefficients, A, lam + off, J)
    v = acc / 4.0
    v[0] = reciprocal_gamma(1.0 - alpha)
    return v


def _adaptive_order(tail: AsymptoticTail, lam: complex, w: float,
                    J0: int = 24, J_max: int = 96) -> int:
    """Increase J until the last term moves the series at the seam value of
    w by less than 1e-12 relative."""
    J = J0
    while J < J_max:
        v = series_coefficients(tail, lam, J)
        ref = max(np.max(np.abs(v[: J + 1] * w ** np.arange(J + 1))), 1e-300)
        if abs(v[J]) * w ** J < 1e-12 * ref:
            return J
        J *= 2
    return J_max


def _series_eval(v: np.ndarray, w: float):
    """Return (v(w), dv/dw * w) via Horner; the second value is
    sum_j j v_j w^j, which is what the x-derivative needs."""
    s = 0.0 + 0.0j
    ds = 0.0 + 0.0j
    for j in range(len(v) - 1, -1, -1):
        s = s * w + v[j]
        ds = ds * w + j * v[j]
    return s, ds


@dataclass
class JostSolution:
    """Outgoing solution at one side for a fixed lambda.

    Evaluation of (u, u') is by tail series beyond the seam and by cached
    dense ODE output inside it.  The stored profile is for the reflected
    coordinate on the minus side; ``evaluate`` handles the mapping back.
    """

    lam: complex
    side: str
    coefficients: np.ndarray
    seam: float                       # series/ODE seam in the working coordinate
    tail: AsymptoticTail
    potential: Potential
    rtol: float = 1e-10
    atol: float = 1e-12
    x_span: float = 40.0
    _segments: list = field(default_factory=list, repr=False)

    # -- working coordinate: y = x on the plus side, y = -x on the minus side.

    def _v_working(self, y: float):
        """Profile (v, dv/dy) at working coordinate y."""
        A = self.tail.decay_rate
        if y >= self.seam:
            w = math.exp(-A * y)
            s, ds = _series_eval(self.coefficients, w)
            return s, -A * ds
        self._extend(y)
        for lo, sol in self._segments:
            if y >= lo - 1e-12:
                vals = sol(y)
                return complex(vals[0]), complex(vals[1])
        raise JostError(f"no cached segment covers y={y}")

    def _extend(self, y: float) -> None:
        lo_covered = self._segments[-1][0] if self._segments else self.seam
        if y >= lo_covered:
            return
        if y < -self.x_span:
            raise JostError(
                f"evaluation at |x|={abs(y)} beyond window x_span={self.x_span}")
        if self._segments:
            start = lo_covered
            v0 = self._segments[-1][1](start)
            y0 = np.array([complex(v0[0]), complex(v0[1])], dtype=complex)
        else:
            start = self.seam
            w = math.exp(-self.tail.decay_rate * start)
            s, ds = _series_eval(self.coefficients, w)
            y0 = np.array([s, -self.tail.decay_rate * ds], dtype=complex)

        lam = self.lam
        if self.side == "plus":
            def V(yy):
                return self.potential.evaluate(yy)
        else:
            def V(yy):
                return self.potential.evaluate(-yy)

        def rhs(yy, u):
            return [u[1], V(yy) * u[0] - 2j * lam * u[1]]

        sol = solve_ivp(rhs, (start, y), y0, method="DOP853",
                        rtol=self.rtol, atol=self.atol, dense_output=True)
        if not sol.success:
            raise JostError(f"ODE continuation failed at lambda={lam}: {sol.message}")
        self._segments.append((y, sol.sol))

    def evaluate(self, x: float):
        """Return (u, du/dx) at x."""
        lam = self.lam
        if self.side == "plus":
            v, dv = self._v_working(x)
            phase = np.exp(1j * lam * x)
            return phase * v, phase * (1j * lam * v + dv)
        v, dv = self._v_working(-x)
        phase = np.exp(-1j * lam * x)
        # u(x) = e^{-i lam x} v(-x);  u'(x) = e^{-i lam x} (-i lam v - v'(-x)).
        return phase * v, phase * (-1j * lam * v - dv)


def build_outgoing(pot: Potential, lam: complex, side: str,
                   rtol: float = 1e-10, atol: float = 1e-12,
                   x_span: float = 40.0, seam: float | None = None) -> JostSolution:
    """Construct the outgoing solution at the given side for lambda."""
    tail = pot.tail(side)
    if seam is None:
        # The match point is where the tail series reaches its certified
        # accuracy; the profile series inherits that scale, and every extra
        # unit of seam amplifies backward-integration error by
        # exp(2 |Im lambda|) in the lower half plane, so the seam sits
        # exactly there.
        seam = tail.match_point
    J = _adaptive_order(tail, lam, math.exp(-tail.decay_rate * seam))
    v = series_coefficients(tail, lam, J)
    return JostSolution(lam=complex(lam), side=side, coefficients=v, seam=seam,
                        tail=tail, potential=pot, rtol=rtol, atol=atol,
                        x_span=x_span)


def evaluate_outgoing(pot: Potential, lam: complex, side: str, x: float,
                      **kwargs):
    """One-shot (u, du) of the outgoing solution; builds a fresh JostSolution."""
    return build_outgoing(pot, lam, side, **kwargs).evaluate(x)


def evaluate_incoming(pot: Potential, lam: complex, side: str, x: float,
                      **kwargs):
    """Incoming solution: the outgoing solution at -lambda."""
    return evaluate_outgoing(pot, -lam, side, x, **kwargs)
