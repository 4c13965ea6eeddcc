"""Stable coefficient sets for evaluating matrix polynomials with one matrix
product fewer than Paterson-Stockmeyer."""

from .apps import TestMatrixSpec, exp_taylor_coeffs, gallery, geometric_coeffs, westreich_eval
from .extprec import DOUBLE, SINGLE, PrecisionTarget, parse_number, round_to_target, working_digits
from .matrixeval import EvalResult, evaluate_scheme, norm1
from .pipeline import LeadingCoefficientError, generate
from .psm import Polynomial, optimal_degrees, ps_cost, ps_eval
from .scheme import (
    CoefficientSet,
    RecommendPSError,
    SchemeParameterError,
    SchemeSpec,
    reconstruct,
    scheme_cost,
    select_params,
)
from .solver import InnerProblem, SolverConfig, SolverError, solve, solve_general, solve_s2
from .stability import NoRealSetError, StabilityReport, assess, scalar_probe

__version__ = "0.1.0"

__all__ = [
    "CoefficientSet",
    "DOUBLE",
    "EvalResult",
    "InnerProblem",
    "LeadingCoefficientError",
    "NoRealSetError",
    "Polynomial",
    "PrecisionTarget",
    "RecommendPSError",
    "SINGLE",
    "SchemeParameterError",
    "SchemeSpec",
    "SolverConfig",
    "SolverError",
    "StabilityReport",
    "TestMatrixSpec",
    "assess",
    "evaluate_scheme",
    "exp_taylor_coeffs",
    "gallery",
    "generate",
    "geometric_coeffs",
    "norm1",
    "optimal_degrees",
    "parse_number",
    "ps_cost",
    "ps_eval",
    "reconstruct",
    "round_to_target",
    "scalar_probe",
    "scheme_cost",
    "select_params",
    "solve",
    "solve_general",
    "solve_s2",
    "westreich_eval",
    "working_digits",
]
