from .homogenized import HomogenizedCone, homogenize
from .restricted import (ConstraintSystem, build_restricted, sample_extreme,
                         sphere_direction)
from .uncertainty_set import (SocBlock, UncertaintySet, affine_image, box,
                              intersect, norm_ball, simplex_100pct)

__all__ = [
    "HomogenizedCone", "homogenize",
    "ConstraintSystem", "build_restricted", "sample_extreme",
    "sphere_direction",
    "SocBlock", "UncertaintySet", "affine_image", "box", "intersect",
    "norm_ball", "simplex_100pct",
]
