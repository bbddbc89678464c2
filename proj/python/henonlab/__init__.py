"""Python interface to the henonlab core."""

from ._core import (
    FatouEvaluator,
    HenonMap,
    HornMap,
    __version__,
    alpha_epsilon,
    box_dimension,
    canonical_lift,
    cylinder_coordinate,
    green,
    green_slice,
    implosion_median,
    semi_parabolic_map,
    semi_parabolic_parameter,
    shoot_quadratic,
    uniform_bowen,
)

__all__ = [
    "FatouEvaluator",
    "HenonMap",
    "HornMap",
    "__version__",
    "alpha_epsilon",
    "box_dimension",
    "canonical_lift",
    "cylinder_coordinate",
    "green",
    "green_slice",
    "implosion_median",
    "semi_parabolic_map",
    "semi_parabolic_parameter",
    "shoot_quadratic",
    "uniform_bowen",
]
