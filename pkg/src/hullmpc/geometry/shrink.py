"""Recover a usable closest point inside a predicted collision by shrinking.

Both bodies are scaled about their geometric centers (the local-frame
origins) by a factor that squares every round until the scaled bodies come
apart; the witness point on the shrunken robot hull is then expanded back
onto the original hull surface.
"""
from __future__ import annotations

import numpy as np

from ..errors import MaxShrinkIterations
from .core import ConvexHull, HomTransform, transform_hull
from .distance import distance

SHRINK_MAX_ITER = 32
DEFAULT_GAMMA0 = 0.5


def shrink_closest_point(x_pred, P: ConvexHull, O: ConvexHull,
                         H_robot: HomTransform, H_obstacle: HomTransform,
                         gamma0: float = DEFAULT_GAMMA0) -> tuple[np.ndarray, bool]:
    """Closest point on a robot hull that collides at a predicted pose.

    Parameters
    ----------
    x_pred : SystemState or None
        Predicted state the poses were computed at; carried for diagnostics.
    P, O : ConvexHull
        Robot hull and obstacle in their centroid-origin local frames.
    H_robot, H_obstacle : HomTransform
        Local-to-global poses of the two bodies.
    gamma0 : float
        Initial shrink factor in (0, 1).

    Returns
    -------
    (r_local, collision_out)
        ``r_local`` lies on the original hull ``P`` in its local frame;
        ``collision_out`` is False on success.

    Raises
    ------
    ValueError
        If the bodies do not actually collide at the given poses.
    MaxShrinkIterations
        After 32 rounds; scaling about coincident centers never separates.
    """
    if not 0.0 < gamma0 < 1.0:
        raise ValueError(f"gamma0 must be in (0, 1), got {gamma0}")
    res = distance(transform_hull(P, H_robot), transform_hull(O, H_obstacle))
    if not res.collision:
        raise ValueError(
            f"shrink_closest_point requires colliding input ({P.id!r} vs {O.id!r})")

    gamma = gamma0
    for _ in range(SHRINK_MAX_ITER):
        res = distance(transform_hull(P.scaled(gamma), H_robot),
                       transform_hull(O.scaled(gamma), H_obstacle))
        if not res.collision:
            # witness sits on the gamma-scaled hull; 1/gamma maps it back
            # onto the original surface because scaling is about the origin
            r_shrunk = H_robot.inverse().apply(res.p_robot)
            return r_shrunk / gamma, False
        gamma = gamma * gamma
    raise MaxShrinkIterations(
        f"bodies {P.id!r}/{O.id!r} still collide after {SHRINK_MAX_ITER} shrink rounds")
