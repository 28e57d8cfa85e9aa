import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from ... import exceptions
from ...enums import ConeEnum, ConicStatusEnum
from ._base import ConicBackend
from .program import ConicSolution

_BOUNDS = {
    ConeEnum.ZERO: (0.0, 0.0),
    ConeEnum.FREE: (None, None),
    ConeEnum.NONNEGATIVE: (0.0, None),
}


class HighsBackend(ConicBackend):
    """LP-only backend on top of scipy's HiGHS bindings."""
    backend = "highs"

    def supports(self, program):
        return program.is_linear

    def _bounds(self, program):
        bounds = []
        for block in program.blocks:
            if block.cone not in _BOUNDS:
                raise exceptions.UnsupportedConeError(
                    "HiGHS cannot handle {} blocks".format(block.cone.value)
                )
            bounds.extend([_BOUNDS[block.cone]] * block.dim)
        return bounds

    def _solve(self, program, settings):
        bounds = self._bounds(program)
        has_rows = program.n_rows > 0
        options = {
            "primal_feasibility_tolerance": settings.feas_tol,
            "dual_feasibility_tolerance": settings.feas_tol,
            "disp": bool(settings.verbose),
        }
        result = linprog(
            program.c,
            A_eq=program.A if has_rows else None,
            b_eq=program.b if has_rows else None,
            bounds=bounds, method="highs", options=options,
        )
        iterations = int(getattr(result, "nit", 0) or 0)

        if result.status == 0:
            dual = None
            if has_rows and getattr(result, "eqlin", None) is not None:
                dual = np.asarray(result.eqlin.marginals, dtype=float)
            return ConicSolution(
                ConicStatusEnum.OPTIMAL, program, primal=result.x,
                dual=dual, iterations=iterations, message=result.message,
            )
        if result.status == 2:
            return ConicSolution(
                ConicStatusEnum.INFEASIBLE, program, iterations=iterations,
                message=result.message,
                certificate=self._farkas_certificate(program, bounds),
            )
        if result.status == 3:
            return ConicSolution(
                ConicStatusEnum.UNBOUNDED, program, iterations=iterations,
                message=result.message,
            )
        stage = "iteration-limit" if result.status == 1 else "numerical"
        return ConicSolution(
            ConicStatusEnum.FAILED, program, iterations=iterations,
            stage=stage, message=result.message,
        )

    def _farkas_certificate(self, program, bounds):
        """y with A^T y <= 0 on sign-constrained columns, = 0 on free
        columns and b.y > 0; None when no such ray is found."""
        if not program.n_rows:
            return None
        AT = sparse.csr_matrix(program.A.T)
        nonneg = np.array([lo == 0.0 and hi is None for lo, hi in bounds])
        free = np.array([lo is None for lo, hi in bounds])
        result = linprog(
            -program.b,
            A_ub=AT[np.flatnonzero(nonneg)] if nonneg.any() else None,
            b_ub=np.zeros(int(nonneg.sum())) if nonneg.any() else None,
            A_eq=AT[np.flatnonzero(free)] if free.any() else None,
            b_eq=np.zeros(int(free.sum())) if free.any() else None,
            bounds=[(-1.0, 1.0)] * program.n_rows, method="highs",
        )
        if result.status == 0 and -result.fun > 0:
            return np.asarray(result.x, dtype=float)
        return None
