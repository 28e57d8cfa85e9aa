from .general_qp import (ConvexExact, GeneralQp, QpResiduals, build,
                         convex_exact, polynomial_case)

__all__ = [
    "ConvexExact", "GeneralQp", "QpResiduals", "build", "convex_exact",
    "polynomial_case",
]
