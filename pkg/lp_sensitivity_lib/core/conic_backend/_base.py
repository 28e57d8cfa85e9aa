import time
from abc import ABCMeta, abstractmethod

from ... import exceptions
from ...enums import ConicStatusEnum
from ...logger import logger
from ..utils import SubclassesMixin


class ConicBackend(SubclassesMixin, metaclass=ABCMeta):
    """Uniform solve contract for every convex subproblem.

    Subclasses declare a `backend` name and implement `_solve`.
    Results are re-verified here from the primal point, so a solver
    claiming optimality with large residuals is downgraded.
    """

    @classmethod
    def get_backend(cls, backend="auto"):
        subclasses_dict = cls._get_subclasses_dict("backend")
        if backend not in subclasses_dict:
            raise exceptions.BackendNotImplementedError(
                "Conic backend \"{}\" not implemented".format(backend)
            )
        logger.info("Conic backend: {}".format(subclasses_dict[backend]))
        return subclasses_dict[backend]()

    def supports(self, program):
        return True

    def solve(self, program, settings=None):
        """Solve a conic program.

        Args:
            program (ConicProgram)
            settings (ConicSettings): defaults to the environment's

        Returns:
            ConicSolution
        """
        if settings is None:
            from ..environment import ExecutionEnvironment
            settings = ExecutionEnvironment().conic_settings

        if not self.supports(program):
            raise exceptions.UnsupportedConeError(
                "Backend {} cannot solve {}".format(self.backend, program)
            )

        logger.debug("Solving {}".format(program))
        start = time.perf_counter()
        solution = self._solve(program, settings)
        solution.wall_time = time.perf_counter() - start
        self._verify(solution, settings)

        log = logger.info if solution.is_usable else logger.warning
        log("{} -> {} in {:.3f}s ({} iterations){}".format(
            program.name, solution.status.value, solution.wall_time,
            solution.iterations,
            "" if solution.stage is None else " stage={}".format(
                solution.stage
            ),
        ))
        return solution

    def _verify(self, solution, settings):
        if solution.status != ConicStatusEnum.OPTIMAL:
            return
        if solution.residuals.worst > settings.acceptance_tol:
            logger.warning(
                "{}: solver reported optimal but recomputed {}".format(
                    solution.program.name, solution.residuals
                )
            )
            solution.status = ConicStatusEnum.INACCURATE

    @abstractmethod
    def _solve(self, program, settings):
        """Backend specific solve returning a ConicSolution."""
        pass
