from .general_form import GeneralFormLp, LpRow, LpVariable
from .linear_program import (Conversion, ConversionStep, LinearProgram,
                             standardize)
from .solve import (AssumptionReport, LpSolution, check_assumptions,
                    solve_perturbed)

__all__ = [
    "GeneralFormLp", "LpRow", "LpVariable",
    "Conversion", "ConversionStep", "LinearProgram", "standardize",
    "AssumptionReport", "LpSolution", "check_assumptions", "solve_perturbed",
]
