from .agm import (MAXIMIZER_CUBIC, PROP2_LAMBDA_CR, PROP4_LAMBDA_CR, PROP5_LAMBDA_CR,
                  i3_curve, i4_curve, lambda3, lambda3_maximizer, prop1_lambda, prop2_cubic, prop2_depressed,
                  prop4_closed_form, prop5_quartic_roots, solve_i3, solve_i4,
                  solve_weakly_periodic, w_polynomial_in_z1, w_polynomial_value)
from .common import Solution, SolutionLabel, SolutionReport
from .rpoly import RFactorizationReport, r_polynomial, verify_R_factorization
from .ti import (asymmetric_pair_from_t, critical_lambda, lambda_of_t, lambda_of_t_hinge,
                 solve_symmetric, solve_ti, solve_ti_generic)
from ..polynomial import count_positive_roots, solve_cubic_cardano

__all__ = [
    "MAXIMIZER_CUBIC", "PROP2_LAMBDA_CR", "PROP4_LAMBDA_CR", "PROP5_LAMBDA_CR",
    "prop2_cubic", "prop2_depressed",
    "Solution", "SolutionLabel", "SolutionReport", "asymmetric_pair_from_t",
    "count_positive_roots", "critical_lambda", "i3_curve", "i4_curve", "lambda3",
    "lambda3_maximizer", "lambda_of_t", "lambda_of_t_hinge", "prop1_lambda",
    "prop4_closed_form", "prop5_quartic_roots", "r_polynomial", "RFactorizationReport",
    "solve_cubic_cardano", "solve_i3", "solve_i4", "solve_symmetric", "solve_ti",
    "solve_ti_generic", "solve_weakly_periodic", "verify_R_factorization",
    "w_polynomial_in_z1", "w_polynomial_value",
]
