"""Hull-to-hull and hull-to-scene distance queries."""
from __future__ import annotations

import numpy as np

from ..errors import EmptyObstacleSet, NonConvergence
from . import backend
from .core import ClosestPointResult, ConvexHull

GJK_TOL = 1e-9
GJK_MAX_ITER = 128


def distance(P: ConvexHull, O: ConvexHull,
             tol: float = GJK_TOL, max_iter: int = GJK_MAX_ITER) -> ClosestPointResult:
    """Minimal distance and witness pair between two hulls in a common frame.

    Touching contact (distance below ``tol``) reports a collision because a
    zero-length gradient is useless to the distance constraints downstream.
    """
    status, dist, pa, pb, _ = backend.gjk_pair(P.vertices, O.vertices, tol, max_iter)
    if status == backend.STATUS_NO_CONVERGENCE:
        raise NonConvergence(
            f"GJK exceeded {max_iter} iterations on hulls {P.id!r}/{O.id!r}")
    if status == backend.STATUS_COLLISION:
        return ClosestPointResult.colliding()
    return ClosestPointResult.disjoint(pa, pb)


def closest_obstacle(P: ConvexHull, obstacles: list[ConvexHull],
                     tol: float = GJK_TOL) -> tuple[int, ClosestPointResult]:
    """Index and result of the obstacle closest to ``P``.

    A colliding obstacle dominates: the first one found is returned with
    collision=True.
    """
    if not obstacles:
        raise EmptyObstacleSet("closest_obstacle needs at least one obstacle")
    best_idx = -1
    best: ClosestPointResult | None = None
    for m, O in enumerate(obstacles):
        res = distance(P, O, tol=tol)
        if res.collision:
            return m, res
        if best is None or res.distance < best.distance:
            best_idx, best = m, res
    return best_idx, best


def point_result(point: np.ndarray, obstacles: list[ConvexHull],
                 point_id: str = "point") -> tuple[int, ClosestPointResult]:
    """Closest obstacle to a single global point treated as a point hull."""
    return closest_obstacle(ConvexHull(point_id, np.asarray(point, float).reshape(1, 3)),
                            obstacles)
