"""Generalized modular equations of signature 2, 3 and 4.

Numerical side: ``hypergeom`` (2F1(t, 1-t; 1; z) and the ratio R_t),
``solver`` (beta of order p over alpha) and ``polyfit`` (integer modular
polynomials from solved pairs).  Exact side: ``hecke`` (Hecke-group
matrices) and ``degrees`` (index formulas).
"""

from .degrees import DegreeRecord, dedekind_psi, degree_mu, degree_table, russell_degree
from .errors import (
    AmbiguousNullspaceError,
    ConvergenceError,
    DomainError,
    FitError,
    InvariantError,
    ModeqError,
    PrecisionExhaustedError,
    RoundingFailureError,
)
from .hecke import HeckeMatrix, IntMatrix, fricke_conj, in_HMp, theta_iso
from .hypergeom import SignatureParams, gauss_2f1_unit, multiplier, ratio_R
from .polyfit import BivariatePolynomial, eval_poly, fit_modular_polynomial, reconstruct
from .solver import ModulusPair, solve_order_p, swap_solution, verify_solution

__version__ = "0.1.0"

__all__ = [
    "AmbiguousNullspaceError", "BivariatePolynomial", "ConvergenceError", "DegreeRecord",
    "DomainError", "FitError", "HeckeMatrix", "IntMatrix", "InvariantError", "ModeqError",
    "ModulusPair", "PrecisionExhaustedError", "RoundingFailureError", "SignatureParams",
    "dedekind_psi", "degree_mu", "degree_table", "eval_poly", "fit_modular_polynomial",
    "fricke_conj", "gauss_2f1_unit", "in_HMp", "multiplier", "ratio_R", "reconstruct",
    "russell_degree", "solve_order_p", "swap_solution", "theta_iso", "verify_solution",
]
