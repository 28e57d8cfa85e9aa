from ._base import ConicBackend
from .cvxpy_backend import CvxpyBackend
from .highs_backend import HighsBackend


class AutoBackend(ConicBackend):
    """HiGHS for linear programs, cvxpy for everything else."""
    backend = "auto"

    def __init__(self):
        self._linear = HighsBackend()
        self._conic = CvxpyBackend()

    def _pick(self, program):
        return self._linear if program.is_linear else self._conic

    def _solve(self, program, settings):
        return self._pick(program)._solve(program, settings)
