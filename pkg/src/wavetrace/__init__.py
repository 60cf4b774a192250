"""Scattering resonances, transmission coefficients, and wave-propagator
traces for 1D Schrodinger operators with exponentially decaying potentials."""

from .potentials import (AsymptoticTail, Potential, fit_tail_coefficients,
                         make_poschl_teller, make_sech2, make_zero_potential)
from .sds import (SdSGeometry, make_regge_wheeler, make_sds_geometry,
                  radius_from_tortoise, tortoise)
from .jost import JostSolution, build_outgoing, evaluate_incoming, \
    evaluate_outgoing, series_coefficients
from .scattering import det_s, phase_derivative, transmission, wronskian
from .resonances import SearchRegion, ZeroResult, classify_zero, count_zeros, \
    find_zeros
from .trace import Grid, TraceCurve, discretize, eigendecompose, \
    flat_trace_difference, pt_closed_form
from .poisson import PoissonConfig, compare_curves, poisson_rhs, \
    poschl_teller_lattice, renormalization_term, resonance_sum
from .birman_krein import lhs_trace, make_bump, rhs_bk
from .special_functions import digamma, reciprocal_gamma

__version__ = "0.1.0"
