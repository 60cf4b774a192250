"""Zero finding for the Wronskian F(lambda) by the argument principle.

Rectangles in the lambda plane are classified by the winding number of F
around their boundary (adaptive phase unwrapping), quadrisected until each
box isolates a single zero (or shrinks below tolerance for clusters), and
the isolated zeros are Newton-refined.  Classification follows the zero
geometry: upper half plane means bound state, otherwise resonance, unless
the Jost normalization degenerates (all series coefficients vanish), which
marks a spurious zero of the Gamma-normalization rather than of the
solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .jost import series_coefficients
from .potentials import Potential
from .scattering import wronskian

__all__ = ["SearchRegion", "ZeroResult", "BoundaryZeroError", "ClusterDepthError",
           "count_zeros", "find_zeros", "classify_zero"]


class BoundaryZeroError(RuntimeError):
    """|F| stayed too small on a region boundary after repeated nudging."""


class ClusterDepthError(RuntimeError):
    """Quadrisection exceeded maximum depth (cluster tighter than tol)."""


@dataclass(frozen=True)
class SearchRegion:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError(f"empty search region {self}")

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.re_min + self.re_max),
                       0.5 * (self.im_min + self.im_max))

    @property
    def diameter(self) -> float:
        return math.hypot(self.re_max - self.re_min, self.im_max - self.im_min)

    def corners(self):
        return (complex(self.re_min, self.im_min),
                complex(self.re_max, self.im_min),
                complex(self.re_max, self.im_max),
                complex(self.re_min, self.im_max))

    def quadrisect(self, f_re: float = 0.5, f_im: float = 0.5):
        rm = self.re_min + f_re * (self.re_max - self.re_min)
        im = self.im_min + f_im * (self.im_max - self.im_min)
        return (SearchRegion(self.re_min, rm, self.im_min, im),
                SearchRegion(rm, self.re_max, self.im_min, im),
                SearchRegion(self.re_min, rm, im, self.im_max),
                SearchRegion(rm, self.re_max, im, self.im_max))


@dataclass(frozen=True)
class ZeroResult:
    lam: complex
    multiplicity: int
    newton_residual: float
    classification: str | None
    box: SearchRegion


class _FCache:
    """Memoized Wronskian evaluations, shared across subdivision boxes."""

    def __init__(self, pot: Potential, rtol: float, atol: float):
        self.pot = pot
        self.rtol = rtol
        self.atol = atol
        self._values: dict[complex, complex] = {}

    def __call__(self, lam: complex) -> complex:
        val = self._values.get(lam)
        if val is None:
            val = wronskian(self.pot, lam, rtol=self.rtol, atol=self.atol)
            self._values[lam] = val
        return val


def _edge_samples(corners, n_per_edge: int):
    pts = []
    for a, b in zip(corners, corners[1:] + corners[:1]):
        # Dyadic fractions so refinement reuses cached coarse samples.
        for k in range(n_per_edge):
            t = k / n_per_edge
            pts.append(a + t * (b - a))
    return pts


def _winding(F: _FCache, region: SearchRegion, start: int = 64,
             cap: int = 4096, zero_floor: float = 1e-6):
    """Winding number of F around the region boundary.

    Doubles the per-edge sampling until all phase increments are < pi/2.
    Returns (winding, min |F| on the boundary).
    """
    n = start
    while True:
        pts = _edge_samples(region.corners(), n)
        vals = np.array([F(p) for p in pts])
        mods = np.abs(vals)
        if np.any(mods == 0.0):
            return None, 0.0
        # |F| can swing through dozens of orders of magnitude along one
        # contour (it grows like exp(2|Im lambda| x) into the lower half
        # plane), so a boundary zero is flagged by comparing each sample with
        # its neighbors rather than with a global scale.
        local = np.minimum(np.roll(mods, 1), np.roll(mods, -1))
        ratios = mods / local
        if np.min(ratios) < zero_floor:
            return None, float(np.min(ratios))
        phases = np.angle(vals)
        closed = np.concatenate([phases, phases[:1]])
        dphi = np.diff(closed)
        dphi = (dphi + math.pi) % (2.0 * math.pi) - math.pi
        if np.max(np.abs(dphi)) < 0.5 * math.pi:
            total = float(np.sum(dphi))
            return int(round(total / (2.0 * math.pi))), float(np.min(ratios))
        if n >= cap:
            # Treat unresolved phase as a boundary-zero signal.
            return None, float(np.min(ratios))
        n *= 2


def _winding_nudged(F: _FCache, region: SearchRegion, max_nudges: int = 5):
    """Winding with boundary nudging: expand edges that pass near a zero."""
    reg = region
    for _ in range(max_nudges + 1):
        w, floor = _winding(F, reg)
        if w is not None:
            return w, reg
        pad = 1e-3 * reg.diameter
        reg = SearchRegion(reg.re_min - pad, reg.re_max + pad,
                           reg.im_min - pad, reg.im_max + pad)
    raise BoundaryZeroError(
        f"|F| below threshold on boundary of {region} after {max_nudges} nudges")


def count_zeros(pot: Potential, region: SearchRegion,
                rtol: float = 1e-10, atol: float = 1e-12,
                _cache: _FCache | None = None) -> int:
    """Number of zeros of F inside the region, counted with multiplicity."""
    F = _cache or _FCache(pot, rtol, atol)
    w, _ = _winding_nudged(F, region)
    return w


_SPLIT_FRACTIONS = (0.5, 0.53, 0.47, 0.56, 0.44, 0.515, 0.485)


def _split_clean(F: _FCache, box: SearchRegion, w_parent: int):
    """Quadrisect with split lines that avoid zeros.

    Tries jittered split fractions until all four sub-windings resolve and
    sum to the parent's winding number.  Paired fractions (both lines moving
    together) come first: when a zero sits on one split line, re-jittering
    only the other line can never fix it.
    """
    pairs = [(f, f) for f in _SPLIT_FRACTIONS]
    pairs += [(fr, fi) for fr in _SPLIT_FRACTIONS for fi in _SPLIT_FRACTIONS
              if fr != fi]
    for fr, fi in pairs:
        subs = box.quadrisect(fr, fi)
        windings = []
        ok = True
        for sub in subs:
            w, _ = _winding(F, sub)
            if w is None:
                ok = False
                break
            windings.append(w)
        if ok and sum(windings) == w_parent:
            return list(zip(subs, windings))
    raise BoundaryZeroError(
        f"could not find a clean split of {box}; zeros may lie on the boundary")


def _newton_refine(F: _FCache, lam: complex, tol: float, max_iter: int = 60):
    for _ in range(max_iter):
        h = 1e-6 * (1.0 + abs(lam))
        dF = (F(lam + h) - F(lam - h)) / (2.0 * h)
        if dF == 0:
            break
        step = F(lam) / dF
        lam = lam - step
        if abs(step) < tol:
            break
    return lam, abs(F(lam))


def find_zeros(pot: Potential, region: SearchRegion, tol: float = 1e-8,
               rtol: float = 1e-10, atol: float = 1e-12,
               max_depth: int = 40, classify: bool = True):
    """Locate all zeros of F in the region.

    Quadrisects until each box has winding <= 1, Newton-refines the isolated
    zeros, and reports clusters smaller than tol as a single multiple zero at
    the box center.  Results are sorted by (Re, Im).
    """
    F = _FCache(pot, rtol, atol)
    results: list[ZeroResult] = []
    # Top-level boundary gets the outward nudging treatment; interior split
    # lines are instead jittered so they never pass through a zero (which
    # would otherwise double-count zeros sitting on round-number axes).
    w0, region = _winding_nudged(F, region)
    stack = [(region, w0, 0)]
    while stack:
        box, w, depth = stack.pop()
        if depth > max_depth:
            raise ClusterDepthError(f"max depth exceeded at {box}")
        if w == 0:
            continue
        if w == 1:
            lam, residual = _newton_refine(F, box.center, tol)
            margin = max(tol, 1e-9 * box.diameter)
            inside = (box.re_min - margin <= lam.real <= box.re_max + margin
                      and box.im_min - margin <= lam.imag <= box.im_max + margin)
            if inside:
                results.append(ZeroResult(lam=lam, multiplicity=1,
                                          newton_residual=residual,
                                          classification=None, box=box))
                continue
            # Newton escaped the box (it converged to a neighboring zero);
            # fall through and shrink the box until the center seeds the
            # right basin.
        if box.diameter < tol:
            results.append(ZeroResult(lam=box.center, multiplicity=w,
                                      newton_residual=abs(F(box.center)),
                                      classification=None, box=box))
            continue
        subs = _split_clean(F, box, w)
        stack.extend((sub, sw, depth + 1) for sub, sw in subs)
    results.sort(key=lambda z: (z.lam.real, z.lam.imag))
    if classify:
        results = [classify_zero(pot, z) for z in results]
    return results


def classify_zero(pot: Potential, zero: ZeroResult) -> ZeroResult:
    """Attach a classification: bound_state, resonance, or spurious.

    A zero is spurious when the outgoing-solution normalization collapses:
    every series coefficient on both sides is negligible against the
    coefficient scale at a nearby probe lambda, so the "solution" whose
    Wronskian vanished is identically zero rather than resonant.
    """
    lam = zero.lam
    if lam.imag > 0:
        return replace(zero, classification="bound_state")
    probe = lam + 0.1 * (1.0 + 1.0j)
    for side in ("plus", "minus"):
        tail = pot.tail(side)
        # The constant term 1/Gamma(1 - alpha) vanishes whenever alpha =
        # 2 i lam / A is a positive integer and the zero cascades up to the
        # recursion pole at j = alpha, so the order must cover that index;
        # the baseline comes from the same side (coefficient scales differ
        # by many orders of magnitude between the two tails).
        alpha = abs(2.0 * lam / tail.decay_rate)
        J = max(16, int(math.ceil(alpha)) + 8)
        peak = float(np.max(np.abs(series_coefficients(tail, lam, J))))
        baseline = float(np.max(np.abs(series_coefficients(tail, probe, J))))
        if baseline > 0 and peak < 1e-12 * baseline:
            return replace(zero, classification="spurious")
    return replace(zero, classification="resonance")
