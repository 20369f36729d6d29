"""Secrecy-rate evaluation and power allocation for generalized
artificial-noise secure beamforming over fast-fading wiretap channels."""

from .kkt import (NecessaryConditionReport, ResidualValue,
                  expectation_rational, f1, f2, necessary_condition,
                  y_diagonal)
from .model import (ChannelConfig, PowerAllocation, ValidationChannel,
                    build_optimal_covariances, sample_eve_vectors,
                    sample_gains)
from .quadrature import (DEFAULT_QUAD, QuadratureError, QuadratureSpec,
                         integrate_exp_decay)
from .rate import (RateEstimate, ergodic_log_gap, secrecy_rate_matrix_mc,
                   secrecy_rate_mc, secrecy_rate_quadrature,
                   secrecy_rate_quadrature_batch)
from .solver import (BracketingError, SolveReport, SolverConfig, bisect,
                     golden_section_max, solve_bruteforce, solve_goel_negi,
                     solve_iterative, solve_no_an, solve_step2, solve_step3)
from .specfun import exp_integral_en, f_k

__version__ = "0.1.0"

__all__ = [
    "ChannelConfig", "PowerAllocation", "ValidationChannel",
    "QuadratureSpec", "QuadratureError", "DEFAULT_QUAD",
    "RateEstimate", "ResidualValue", "NecessaryConditionReport",
    "SolverConfig", "SolveReport", "BracketingError",
    "exp_integral_en", "f_k",
    "integrate_exp_decay", "ergodic_log_gap",
    "sample_gains", "sample_eve_vectors", "build_optimal_covariances",
    "secrecy_rate_mc", "secrecy_rate_quadrature",
    "secrecy_rate_quadrature_batch", "secrecy_rate_matrix_mc",
    "expectation_rational", "f1", "f2", "necessary_condition", "y_diagonal",
    "bisect", "golden_section_max", "solve_step2", "solve_step3",
    "solve_iterative", "solve_bruteforce", "solve_goel_negi", "solve_no_an",
]
