import numpy as np
from scipy import sparse

from ... import exceptions
from ...enums import ConeEnum, ConicStatusEnum, ConstraintFamilyEnum, LpStatusEnum
from ...logger import logger
from ..conic_backend import ConicProgramBuilder
from ..environment import ExecutionEnvironment
from ..utils import as_vector, relative_scale


class LpSolution:
    def __init__(self, status, x=None, y=None, s=None, objective=None,
                 message=""):
        self.status = status
        self.x = x
        self.y = y
        self.s = s
        self.objective = objective
        self.message = message

    @property
    def is_optimal(self):
        return self.status == LpStatusEnum.OPTIMAL

    def general_x(self, conversion):
        """Map the standard-form x back to general-form variables."""
        if self.x is None:
            return None
        return conversion.general_x(self.x)

    def __repr__(self):
        return "LpSolution({}, objective={})".format(
            self.status.value, self.objective
        )


class AssumptionReport:
    def __init__(
        self, primal_feasible, dual_feasible, primal_bounded, dual_bounded,
        nominal_value=None
    ):
        self.primal_feasible = primal_feasible
        self.dual_feasible = dual_feasible
        self.primal_bounded = primal_bounded
        self.dual_bounded = dual_bounded
        self.nominal_value = nominal_value

    @property
    def passed(self):
        return (
            self.primal_feasible and self.dual_feasible
            and (self.primal_bounded or self.dual_bounded)
        )

    @property
    def violated_clause(self):
        if not self.primal_feasible:
            return "nominal primal feasible set P(0) is empty"
        if not self.dual_feasible:
            return "nominal dual feasible set D(0) is empty"
        if not (self.primal_bounded or self.dual_bounded):
            return "neither P(0) nor D(0) is bounded"
        return None

    def raise_for_violation(self):
        if self.passed:
            return
        if not (self.primal_feasible and self.dual_feasible):
            raise exceptions.NominalInfeasibleError(
                self.violated_clause, self.violated_clause
            )
        raise exceptions.AssumptionViolationError(
            self.violated_clause, self.violated_clause
        )

    def __repr__(self):
        return (
            "AssumptionReport(P0={}, D0={}, P0 bounded={}, D0 bounded={})"
        ).format(
            self.primal_feasible, self.dual_feasible,
            self.primal_bounded, self.dual_bounded,
        )


def _primal_program(lp, rhs, cost, name):
    builder = ConicProgramBuilder(name)
    builder.add_block("x", ConeEnum.NONNEGATIVE, lp.n)
    builder.add_equalities(
        lp.A, rhs, ConstraintFamilyEnum.BASE_EQUALITY
    )
    builder.set_objective(cost)
    return builder.build()


def _dual_program(lp, cost, name):
    """Feasibility of A^T y <= cost with y free."""
    builder = ConicProgramBuilder(name)
    builder.add_block("y", ConeEnum.FREE, lp.m)
    builder.add_inequalities(
        -sparse.csr_matrix(lp.A.T), -cost,
        ConstraintFamilyEnum.BASE_EQUALITY,
    )
    return builder.build()


def _is_feasible(program, backend):
    solution = backend.solve(program)
    if solution.is_usable:
        return True
    if solution.status == ConicStatusEnum.INFEASIBLE:
        return False
    raise exceptions.NumericalFailureError(
        "Feasibility check {} failed: {}".format(
            program.name, solution.message
        ),
        solution.stage,
    )


def _verify(lp, rhs, cost, x, y, s, settings):
    scale_b = relative_scale(rhs)
    scale_c = relative_scale(cost)
    primal = float(np.abs(lp.A.dot(x) - rhs).max()) / scale_b
    dual = float(np.abs(lp.A.T.dot(y) + s - cost).max()) / scale_c
    sign = max(0.0, -float(x.min()) / scale_b, -float(s.min()) / scale_c)
    objective = float(cost.dot(x))
    gap = abs(objective - float(rhs.dot(y))) / max(1.0, abs(objective))
    return (
        max(primal, dual, sign) <= settings.feas_tol
        and gap <= settings.gap_tol
    ), (primal, dual, sign, gap)


def solve_perturbed(lp, b=None, c=None, backend=None):
    """Solve p(b, c) = min (c_hat + c).x s.t. A x = b_hat + b, x >= 0.

    Args:
        lp (LinearProgram)
        b (numpy.ndarray): right-hand-side perturbation, zero if None
        c (numpy.ndarray): objective perturbation, zero if None
        backend (ConicBackend): LP backend, HiGHS by default

    Returns:
        LpSolution: objective includes the program offset
    """
    environment = ExecutionEnvironment()
    backend = backend or environment.lp_backend
    rhs = lp.b_hat + as_vector(b, lp.m, "b")
    cost = lp.c_hat + as_vector(c, lp.n, "c")

    solution = backend.solve(_primal_program(lp, rhs, cost, lp.name))

    if solution.is_usable and solution.dual is not None:
        x = np.asarray(solution.value("x"), dtype=float)
        y = np.asarray(solution.dual, dtype=float)
        s = cost - lp.A.T.dot(y)
        accepted, residuals = _verify(
            lp, rhs, cost, x, y, s, environment.settings
        )
        if accepted:
            return LpSolution(
                LpStatusEnum.OPTIMAL, x=x, y=y, s=s,
                objective=float(cost.dot(x)) + lp.offset,
            )
        logger.warning(
            "{}: optimal point rejected, residuals "
            "(primal, dual, sign, gap) = {}".format(lp.name, residuals)
        )
        return LpSolution(
            LpStatusEnum.NUMERICAL_FAILURE,
            message="residuals {} above tolerance".format(residuals),
        )
    if solution.status == ConicStatusEnum.INFEASIBLE:
        return LpSolution(LpStatusEnum.PRIMAL_INFEASIBLE)
    if solution.status == ConicStatusEnum.UNBOUNDED:
        return LpSolution(LpStatusEnum.DUAL_INFEASIBLE)

    # disambiguate through the two feasibility problems
    try:
        if not _is_feasible(
            _primal_program(lp, rhs, np.zeros(lp.n), lp.name + "_p_feasibility"),
            backend,
        ):
            return LpSolution(LpStatusEnum.PRIMAL_INFEASIBLE)
        if not _is_feasible(
            _dual_program(lp, cost, lp.name + "_d_feasibility"), backend
        ):
            return LpSolution(LpStatusEnum.DUAL_INFEASIBLE)
    except exceptions.NumericalFailureError as e:
        logger.warning(e.message)
    return LpSolution(
        LpStatusEnum.NUMERICAL_FAILURE,
        message="backend stage {}: {}".format(
            solution.stage, solution.message
        ),
    )


def _recession_value(program, backend):
    solution = backend.solve(program)
    if not solution.is_usable:
        raise exceptions.NumericalFailureError(
            "Boundedness test {} ended {}".format(
                program.name, solution.status.value
            ),
            solution.stage,
        )
    return -solution.objective


def _primal_bounded(lp, backend, tol):
    # max 1.x over A x = 0, 0 <= x <= 1
    builder = ConicProgramBuilder(lp.name + "_p_recession")
    builder.add_block("x", ConeEnum.NONNEGATIVE, lp.n)
    builder.add_equalities(
        lp.A, np.zeros(lp.m), ConstraintFamilyEnum.BASE_EQUALITY
    )
    builder.add_inequalities(
        -sparse.identity(lp.n), -np.ones(lp.n),
        ConstraintFamilyEnum.BASE_EQUALITY,
    )
    builder.set_objective(-np.ones(lp.n))
    return _recession_value(builder.build(), backend) <= tol * lp.n


def _dual_bounded(lp, backend, tol):
    # max 1.s over A^T y + s = 0, 0 <= s <= 1, -1 <= y <= 1; null directions
    # of A^T move y without changing s
    builder = ConicProgramBuilder(lp.name + "_d_recession")
    builder.add_block("y", ConeEnum.FREE, lp.m)
    builder.add_block("s", ConeEnum.NONNEGATIVE, lp.n)
    builder.add_equalities(
        sparse.hstack([sparse.csr_matrix(lp.A.T), sparse.identity(lp.n)]),
        np.zeros(lp.n), ConstraintFamilyEnum.BASE_EQUALITY,
    )
    identity_m = sparse.identity(lp.m)
    builder.add_inequalities(
        sparse.vstack([identity_m, -identity_m]), -np.ones(2 * lp.m),
        ConstraintFamilyEnum.BASE_EQUALITY,
    )
    builder.add_inequalities(
        -sparse.identity(lp.n), -np.ones(lp.n),
        ConstraintFamilyEnum.BASE_EQUALITY, col_offset=lp.m,
    )
    builder.set_objective(-np.ones(lp.n), col_offset=lp.m)
    return _recession_value(builder.build(), backend) <= tol * lp.n


def check_assumptions(lp, backend=None):
    """Nonemptiness and boundedness of P(0) and D(0).

    Args:
        lp (LinearProgram)
        backend (ConicBackend): LP backend, HiGHS by default

    Returns:
        AssumptionReport
    """
    environment = ExecutionEnvironment()
    backend = backend or environment.lp_backend
    tol = environment.settings.feas_tol

    primal_feasible = _is_feasible(
        _primal_program(
            lp, np.array(lp.b_hat), np.zeros(lp.n), lp.name + "_p0"
        ),
        backend,
    )
    dual_feasible = _is_feasible(
        _dual_program(lp, np.array(lp.c_hat), lp.name + "_d0"), backend
    )
    report = AssumptionReport(
        primal_feasible, dual_feasible,
        _primal_bounded(lp, backend, tol), _dual_bounded(lp, backend, tol),
    )
    if report.primal_feasible and report.dual_feasible:
        nominal = solve_perturbed(lp, backend=backend)
        if nominal.is_optimal:
            report.nominal_value = nominal.objective

    log = logger.info if report.passed else logger.warning
    log("{}: {} nominal={}".format(lp.name, report, report.nominal_value))
    return report
