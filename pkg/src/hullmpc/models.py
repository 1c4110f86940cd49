"""Reference robot models and geometry builders for bundled scenarios.

The synthetic C-arm echoes an image-guided-therapy gantry: a yaw column, a
tilting arm and a C-shaped ring of hulls around an isocenter. Dimensions
below are this artifact's own documented constants.
"""
from __future__ import annotations

import numpy as np

from .geometry import ConvexHull, HomTransform
from .kinematics import Joint, JointLimits, Link, RobotModel

# --- C-arm dimensions [m] ---------------------------------------------------
# The joint axes read (z, x, y) down the chain, so the end-effector XYZ
# angles are a nonlinear function of q (the chain order differs from the
# extrinsic composition order).
COLUMN_POS = (0.0, -1.1, 0.4)     # joint-1 (yaw) origin
ARM_OFFSET = (0.0, 0.45, 0.0)     # joint-1 -> joint-2 (angulation about x)
RING_OFFSET = (0.0, 0.65, -0.4)   # joint-2 -> joint-3 (orbital roll about y)
RING_RADIUS = 0.82
RING_SPAN_DEG = 115.0             # ring covers [-span, +span] measured from -z
N_RING_SEGMENTS = 8
SEGMENT_HALF = (0.17, 0.07, 0.06)  # tangent, ring-normal (y), radial half-extents
HEAD_RADIUS = 0.57                 # detector/source mounting radius
HEAD_HALF = (0.12, 0.08, 0.09)

# --- operating-table dimensions [m] ------------------------------------------
TABLE_HALF = (0.26, 0.75, 0.1)    # long axis along y, through the ring opening
TABLE_CENTER = (0.0, 0.0, -0.40)  # top surface at z = -0.30


def box_vertices(half) -> np.ndarray:
    hx, hy, hz = half
    return np.array([[sx * hx, sy * hy, sz * hz]
                     for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)], float)


def oriented_box(hull_id: str, half, center, rotation=None):
    """Centroid-origin box hull plus its link-frame offset transform."""
    R = np.eye(3) if rotation is None else rotation
    return ConvexHull(hull_id, box_vertices(half)), HomTransform(R, np.asarray(center, float))


def _ring_segment(i: int, theta: float):
    # ring lives in the x-z plane; box frame: x = arc tangent, y = ring
    # normal, z = radial (outward)
    tangent = np.array([np.cos(theta), 0.0, np.sin(theta)])
    radial = np.array([np.sin(theta), 0.0, -np.cos(theta)])
    R = np.column_stack([tangent, np.array([0.0, 1.0, 0.0]), radial])
    if np.linalg.det(R) < 0:
        R[:, 2] = -R[:, 2]
    center = RING_RADIUS * radial
    return oriented_box(f"ring{i}", SEGMENT_HALF, center, R)


def reference_carm() -> RobotModel:
    """13-hull synthetic C-arm: yaw column, tilt arm, orbital C-ring.

    """
    joints = (
        Joint(HomTransform.from_translation(COLUMN_POS), np.array([0.0, 0.0, 1.0])),
        Joint(HomTransform.from_translation(ARM_OFFSET), np.array([1.0, 0.0, 0.0])),
        Joint(HomTransform.from_translation(RING_OFFSET), np.array([0.0, 1.0, 0.0])),
    )
    column = Link("column", 0, (
        oriented_box("column0", (0.14, 0.14, 0.75), (0.0, 0.0, -0.55)),
    ))
    arm = Link("arm", 1, (
        oriented_box("arm0", (0.09, 0.325, 0.09), (0.0, 0.325, 0.0)),
        oriented_box("arm1", (0.09, 0.09, 0.22), (0.0, 0.65, -0.2)),
    ))
    thetas = np.deg2rad(np.linspace(-RING_SPAN_DEG, RING_SPAN_DEG, N_RING_SEGMENTS))
    ring_hulls = [_ring_segment(i, th) for i, th in enumerate(thetas)]
    for name, th in (("source", -np.deg2rad(RING_SPAN_DEG)),
                     ("detector", np.deg2rad(RING_SPAN_DEG))):
        radial = np.array([np.sin(th), 0.0, -np.cos(th)])
        ring_hulls.append(oriented_box(name, HEAD_HALF, HEAD_RADIUS * radial))
    ring = Link("c_ring", 2, tuple(ring_hulls))
    # q3 stays below pi/2 so the XYZ-angle parameterization cannot hit its
    # gimbal lock inside the operating range
    limits = JointLimits(
        position=[[-2.9, 2.9], [-1.2, 1.2], [-1.3, 1.3]],
        velocity=[[-0.6, 0.6]] * 3,
        acceleration=[[-3.0, 3.0]] * 3,
        jerk=[[-60.0, 60.0]] * 3,
    )
    return RobotModel(joints, (column, arm, ring), limits,
                      ee_origin=HomTransform.identity(),
                      ee_velocity_limit=np.array([0.5, 0.5, 0.5]),
                      ee_position_limits=np.array([[-2.9, 2.9]] * 3))


def plate_robot(gap: float = 0.25,
                plate_half=(0.45, 0.3, 0.012),
                plate_offset=(0.0, 0.0, 0.0)) -> RobotModel:
    """Thin plate on a 3R wrist hovering ``gap`` meters above the table top.

    Rotating the plate about the world y axis dips one of its x-edges toward
    the table, which is what makes the closest point migrate edge-to-edge.
    ``plate_offset`` shifts the plate relative to the rotation axis, giving
    the two edges different lever arms.
    """
    base = (0.0, 0.0, gap)
    joints = (
        Joint(HomTransform.from_translation(base), np.array([0.0, 0.0, 1.0])),
        Joint(HomTransform.identity(), np.array([1.0, 0.0, 0.0])),
        Joint(HomTransform.identity(), np.array([0.0, 1.0, 0.0])),
    )
    links = (
        Link("base", 0, ()),
        Link("wrist", 1, ()),
        Link("plate", 2, (oriented_box("plate0", plate_half, plate_offset),)),
    )
    # fast joints with modest deceleration: braking from full speed takes
    # several cycles, which is what makes late constraint discovery unsafe
    limits = JointLimits(
        position=[[-0.35, 0.35], [-0.6, 0.6], [-1.2, 1.2]],
        velocity=[[-1.5, 1.5]] * 3,
        acceleration=[[-1.4, 1.4]] * 3,
        jerk=[[-80.0, 80.0]] * 3,
    )
    return RobotModel(joints, links, limits,
                      ee_origin=HomTransform.identity(),
                      ee_velocity_limit=np.array([1.8, 1.8, 1.8]),
                      ee_position_limits=np.array([[-1.5, 1.5]] * 3))


def table_obstacle(half=TABLE_HALF, center=TABLE_CENTER):
    """Operating-table box as (hull, world pose)."""
    return oriented_box("table", half, center)


def plate_table_obstacle():
    """Table for the plate scenes: top surface at z = 0."""
    return oriented_box("table", (1.0, 0.6, 0.1), (0.0, 0.0, -0.1))
