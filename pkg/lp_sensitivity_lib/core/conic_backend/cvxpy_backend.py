import threading
from collections import OrderedDict

import cvxpy as cp
import numpy as np
from scipy import sparse

from ... import exceptions
from ...constants import CONIC_SOLVER_CHAIN, SCS_MAX_ITERATIONS
from ...enums import ConeEnum, ConicStatusEnum
from ...logger import logger
from ._base import ConicBackend
from .program import ConicSolution, svec, svec_dim, svec_index

_STATUS = {
    cp.OPTIMAL: ConicStatusEnum.OPTIMAL,
    cp.OPTIMAL_INACCURATE: ConicStatusEnum.INACCURATE,
    cp.INFEASIBLE: ConicStatusEnum.INFEASIBLE,
    cp.INFEASIBLE_INACCURATE: ConicStatusEnum.INFEASIBLE,
    cp.UNBOUNDED: ConicStatusEnum.UNBOUNDED,
    cp.UNBOUNDED_INACCURATE: ConicStatusEnum.UNBOUNDED,
}


def _svec_operator(side):
    """Sparse T with T @ vec_F(M) == svec(M) for symmetric M."""
    rows, cols, vals = [], [], []
    half = np.sqrt(2.0) / 2.0
    for j in range(side):
        for i in range(j + 1):
            row = svec_index(i, j)
            if i == j:
                rows.append(row)
                cols.append(i + j * side)
                vals.append(1.0)
            else:
                rows.extend([row, row])
                cols.extend([i + j * side, j + i * side])
                vals.extend([half, half])
    return sparse.csr_matrix(
        (vals, (rows, cols)), shape=(svec_dim(side), side * side)
    )


class _CompiledProgram:
    def __init__(self, program, parametrized):
        self.blocks = []
        pieces = []
        constraints = []
        for block in program.blocks:
            if block.dim == 0:
                self.blocks.append((block, None))
                continue
            if block.cone == ConeEnum.PSD:
                variable = cp.Variable((block.size, block.size), PSD=True)
                flat = cp.reshape(
                    variable, (block.size * block.size,), order="F"
                )
                pieces.append(cp.Constant(_svec_operator(block.size)) @ flat)
            elif block.cone == ConeEnum.NONNEGATIVE:
                variable = cp.Variable(block.dim, nonneg=True)
                pieces.append(variable)
            elif block.cone == ConeEnum.FREE:
                variable = cp.Variable(block.dim)
                pieces.append(variable)
            elif block.cone == ConeEnum.SECOND_ORDER:
                variable = cp.Variable(block.dim)
                constraints.append(cp.SOC(variable[0], variable[1:]))
                pieces.append(variable)
            elif block.cone == ConeEnum.ZERO:
                variable = None
                pieces.append(cp.Constant(np.zeros(block.dim)))
            else:
                raise exceptions.UnsupportedConeError(
                    "Unknown cone {}".format(block.cone)
                )
            self.blocks.append((block, variable))

        x = cp.hstack(pieces) if len(pieces) > 1 else pieces[0]
        if parametrized:
            self.c = cp.Parameter(program.n_variables)
            self.b = cp.Parameter(program.n_rows) if program.n_rows else None
            objective_vector, rhs = self.c, self.b
        else:
            self.c = self.b = None
            objective_vector, rhs = program.c, program.b

        self.equality = None
        if program.n_rows:
            self.equality = cp.Constant(program.A) @ x == rhs
            constraints.append(self.equality)
        self.problem = cp.Problem(
            cp.Minimize(objective_vector @ x), constraints
        )

    def primal(self, program):
        values = np.zeros(program.n_variables)
        for block, variable in self.blocks:
            if variable is None:
                continue
            if block.cone == ConeEnum.PSD:
                matrix = np.asarray(variable.value)
                values[block.slice] = svec((matrix + matrix.T) / 2.0)
            else:
                values[block.slice] = np.asarray(variable.value).reshape(-1)
        return values


class CvxpyBackend(ConicBackend):
    """Conic backend delegating to cvxpy.

    The configured solver is tried first, then the rest of
    CONIC_SOLVER_CHAIN. A failed or inaccurate solve moves on to the next
    installed solver; the first inaccurate result is kept when no solver
    reaches an accepted status. Programs carrying a structure_key are
    compiled once per thread with parametrized objective and right-hand
    side.
    """
    backend = "cvxpy"

    def __init__(self):
        self._local = threading.local()

    def _cache(self):
        if not hasattr(self._local, "programs"):
            self._local.programs = {}
        return self._local.programs

    def _solver_chain(self, requested):
        installed = cp.installed_solvers()
        chain = [
            solver for solver in OrderedDict.fromkeys(
                (requested,) + CONIC_SOLVER_CHAIN
            )
            if solver in installed
        ]
        if not chain:
            raise exceptions.BackendNotImplementedError(
                "None of {} is installed (found {})".format(
                    ", ".join((requested,) + CONIC_SOLVER_CHAIN), installed
                )
            )
        return chain

    def _solver_options(self, solver, settings):
        if solver == "CLARABEL":
            return {
                "tol_feas": settings.feas_tol,
                "tol_gap_abs": settings.gap_tol,
                "tol_gap_rel": settings.gap_tol,
                "max_iter": settings.max_iterations,
            }
        if solver == "SCS":
            return {
                "eps_abs": settings.feas_tol, "eps_rel": settings.gap_tol,
                "max_iters": max(settings.max_iterations, SCS_MAX_ITERATIONS),
            }
        if solver == "CVXOPT":
            return {
                "abstol": settings.gap_tol, "reltol": settings.gap_tol,
                "feastol": settings.feas_tol,
                "max_iters": settings.max_iterations,
            }
        return {}

    def _compiled(self, program):
        if program.structure_key is None:
            return _CompiledProgram(program, parametrized=False)
        cache = self._cache()
        compiled = cache.get(program.structure_key)
        if compiled is None:
            compiled = _CompiledProgram(program, parametrized=True)
            cache[program.structure_key] = compiled
        compiled.c.value = program.c
        if compiled.b is not None:
            compiled.b.value = program.b
        return compiled

    def _accepted(self, solution, settings):
        if solution.status in (
            ConicStatusEnum.INFEASIBLE, ConicStatusEnum.UNBOUNDED
        ):
            return True
        return (
            solution.status == ConicStatusEnum.OPTIMAL
            and solution.residuals.worst <= settings.acceptance_tol
        )

    def _solve(self, program, settings):
        compiled = self._compiled(program)
        kept = None
        for solver in self._solver_chain(settings.solver):
            solution = self._attempt(compiled, program, solver, settings)
            if self._accepted(solution, settings):
                return solution
            logger.warning("{}: {} ended {} ({}), trying the next solver".format(
                program.name, solver, solution.status.value, solution.message
            ))
            if kept is None or (solution.is_usable and not kept.is_usable):
                kept = solution
        return kept

    def _attempt(self, compiled, program, solver, settings):
        try:
            compiled.problem.solve(
                solver=solver, verbose=bool(settings.verbose),
                **self._solver_options(solver, settings)
            )
        except cp.error.SolverError as e:
            logger.exception("[!] cvxpy.SolverError: {}".format(e))
            return ConicSolution(
                ConicStatusEnum.FAILED, program, stage="solver",
                message="{}: {}".format(solver, e),
            )

        status = _STATUS.get(compiled.problem.status, ConicStatusEnum.FAILED)
        stats = compiled.problem.solver_stats
        iterations = int(getattr(stats, "num_iters", 0) or 0)
        message = "{}: {}".format(solver, compiled.problem.status)

        if status in (ConicStatusEnum.OPTIMAL, ConicStatusEnum.INACCURATE):
            dual = None
            if compiled.equality is not None and \
                    compiled.equality.dual_value is not None:
                # cvxpy reports multipliers of (A x - b == 0)
                dual = -np.asarray(compiled.equality.dual_value).reshape(-1)
            return ConicSolution(
                status, program, primal=compiled.primal(program), dual=dual,
                iterations=iterations, message=message,
            )

        certificate = None
        if status == ConicStatusEnum.INFEASIBLE and \
                compiled.equality is not None and \
                compiled.equality.dual_value is not None:
            certificate = np.asarray(compiled.equality.dual_value).reshape(-1)
        return ConicSolution(
            status, program, iterations=iterations,
            stage=None if status != ConicStatusEnum.FAILED else "status",
            message=message, certificate=certificate,
        )
