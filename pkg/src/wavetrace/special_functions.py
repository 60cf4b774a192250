"""Complex reciprocal Gamma and digamma functions.

Both functions are needed for the Jost-solution normalization (the series
constant term is 1/Gamma(1 - alpha)) and for the Gamma part of the
scattering-phase derivative.  1/Gamma is entire, so it is the natural
primitive here: it vanishes exactly at the nonpositive integers instead of
blowing up.
"""

from __future__ import annotations

import cmath
import math

__all__ = ["reciprocal_gamma", "digamma", "EULER_GAMMA", "DigammaPoleError"]

EULER_GAMMA = 0.5772156649015328606065120900824024

# Lanczos coefficients, g = 7, 9 terms.
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


class DigammaPoleError(ValueError):
    """Raised when digamma is evaluated at (or within tolerance of) a pole."""


def _gamma_lanczos(z: complex) -> complex:
    # Valid for Re z > 0.5; callers handle the reflection.
    zm1 = z - 1.0
    x = _LANCZOS_C[0]
    for i in range(1, len(_LANCZOS_C)):
        x += _LANCZOS_C[i] / (zm1 + i)
    t = zm1 + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (zm1 + 0.5) * cmath.exp(-t) * x


def reciprocal_gamma(z: complex) -> complex:
    """Evaluate 1/Gamma(z).

    Entire in z, with zeros exactly at z = 0, -1, -2, ....  The zeros are
    clamped to exactly 0 so that downstream normalizations (v_0 = 1/Gamma(1 -
    alpha)) vanish cleanly when alpha is a positive integer.
    """
    z = complex(z)
    if not (cmath.isfinite(z)):
        raise ValueError(f"reciprocal_gamma requires finite z, got {z}")
    # Exact zero at nonpositive integers.
    if z.imag == 0.0 and z.real <= 0.5:
        n = round(z.real)
        if n <= 0 and abs(z.real - n) < 1e-300:
            return 0.0 + 0.0j
    if z.real > 0.5:
        return 1.0 / _gamma_lanczos(z)
    # Reflection: 1/Gamma(z) = Gamma(1-z) sin(pi z) / pi, with Gamma(1-z)
    # evaluated by Lanczos (Re(1-z) >= 0.5).  sin(pi z) overflows for large
    # |Im z|, so combine through logs when necessary.
    s = cmath.sin(cmath.pi * z)
    if abs(z.imag) < 30.0:
        return _gamma_lanczos(1.0 - z) * s / cmath.pi
    log_sin = cmath.log(s) if s != 0 else -cmath.inf
    log_g = cmath.log(_gamma_lanczos(1.0 - z))
    return cmath.exp(log_g + log_sin - math.log(math.pi))


def _digamma_asymptotic(z: complex) -> complex:
    # Stirling-type expansion, accurate for |z| > ~10 away from the negative
    # real axis (callers guarantee Re z > 0 here).
    # psi(z) ~ log z - 1/(2z) - sum B_{2n} / (2n z^{2n})
    inv = 1.0 / z
    inv2 = inv * inv
    series = (
        1.0 / 12.0
        - inv2 * (1.0 / 120.0
                  - inv2 * (1.0 / 252.0
                            - inv2 * (1.0 / 240.0
                                      - inv2 * (1.0 / 132.0
                                                - inv2 * 691.0 / 32760.0))))
    )
    return cmath.log(z) - 0.5 * inv - inv2 * series


def digamma(z: complex) -> complex:
    """Evaluate psi(z) = Gamma'(z)/Gamma(z).

    Uses the asymptotic expansion for large |z| combined with the recurrence
    psi(z+1) = psi(z) + 1/z, and the reflection formula for Re z < 0.5.
    Raises DigammaPoleError within 1e-12 of a nonpositive integer.
    """
    z = complex(z)
    if z.imag == 0.0 or abs(z.imag) < 1e-12:
        n = round(z.real)
        if n <= 0 and abs(z - n) < 1e-12:
            raise DigammaPoleError(f"digamma pole at z = {z}")
    if z.real < 0.5:
        # psi(1 - z) - psi(z) = pi cot(pi z)
        return digamma(1.0 - z) - cmath.pi / cmath.tan(cmath.pi * z)
    # Upward recurrence until |z| is in the asymptotic regime.
    acc = 0.0 + 0.0j
    while abs(z) < 10.0:
        acc -= 1.0 / z
        z = z + 1.0
    return acc + _digamma_asymptotic(z)
