from . import auto_backend, cvxpy_backend, highs_backend # noqa
from ._base import ConicBackend
from .program import (ConicProgram, ConicProgramBuilder, ConicSettings,
                      ConicSolution, VariableBlock, smat, svec, svec_dim,
                      svec_form, svec_index)
from .dump import dump_conic, render_conic

__all__ = [
    "ConicBackend", "ConicProgram", "ConicProgramBuilder", "ConicSettings",
    "ConicSolution", "VariableBlock", "smat", "svec", "svec_dim",
    "svec_form", "svec_index", "dump_conic", "render_conic",
]
