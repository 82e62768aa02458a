"""Meromorphic solutions of c0*u''' + 6*u**4 + c1*u'' + c2*u*u' + c4*u' + c5*u**2 + c6*u + c7 = 0.

Exact Laurent analysis over Q(w), residue conditions, first-order
subequation fitting, closed-form construction and numerical verification.
"""
from .cyclofield import OMEGA, CycloNumber, as_cyclo, cube_roots_of, parse_cyclo
from .laurent import (
    LaurentSeries,
    OdeInstance,
    check_fuchs_indices,
    dominant_monomials,
    expand_laurent,
    indicial_polynomial,
    ode_residual,
)
from .residues import enumerate_conditions, match_elliptic_families, residue_power_sum
from .subeq import FitReport, Subequation, fit_subequation

__version__ = "0.1.0"

__all__ = [
    "OMEGA",
    "CycloNumber",
    "FitReport",
    "LaurentSeries",
    "OdeInstance",
    "Subequation",
    "as_cyclo",
    "check_fuchs_indices",
    "cube_roots_of",
    "dominant_monomials",
    "enumerate_conditions",
    "expand_laurent",
    "fit_subequation",
    "indicial_polynomial",
    "match_elliptic_families",
    "ode_residual",
    "parse_cyclo",
    "residue_power_sum",
]
