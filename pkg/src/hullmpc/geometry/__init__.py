from .backend import BACKEND_NAME
from .core import (ClosestPointResult, ConvexHull, HomTransform, rotation_about,
                   support, transform_hull)
from .distance import GJK_MAX_ITER, GJK_TOL, closest_obstacle, distance, point_result
from .shrink import DEFAULT_GAMMA0, SHRINK_MAX_ITER, shrink_closest_point

__all__ = [
    "BACKEND_NAME",
    "ClosestPointResult",
    "ConvexHull",
    "HomTransform",
    "rotation_about",
    "support",
    "transform_hull",
    "GJK_MAX_ITER",
    "GJK_TOL",
    "closest_obstacle",
    "distance",
    "point_result",
    "DEFAULT_GAMMA0",
    "SHRINK_MAX_ITER",
    "shrink_closest_point",
]
