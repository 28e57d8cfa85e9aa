from ..conic_backend import dump_conic
from .moment_model import (MomentModel, RelaxationOptions, build_model,
                           build_relaxation, extract_bound, extract_z,
                           moment_values)
from .rows import (FormFamily, HomogeneousRows, collect_homogeneous_rows,
                   gen_rlt, gen_soc_rlt)

__all__ = [
    "MomentModel", "RelaxationOptions", "build_model", "build_relaxation",
    "extract_bound", "extract_z", "moment_values", "FormFamily",
    "HomogeneousRows", "collect_homogeneous_rows", "gen_rlt", "gen_soc_rlt",
    "dump_conic",
]
