from .bounds import (BoundBundle, SampleRun, Trial, Witness, ablation_gap,
                     alternating_improve, gaps, round_from_relaxation,
                     sample_bounds, witness_from_parameters,
                     write_trial_log)
from .oracle import enumerate_vertices, oracle_vertices

__all__ = [
    "BoundBundle", "SampleRun", "Trial", "Witness", "ablation_gap",
    "alternating_improve", "gaps", "round_from_relaxation", "sample_bounds",
    "witness_from_parameters", "write_trial_log", "enumerate_vertices",
    "oracle_vertices",
]
