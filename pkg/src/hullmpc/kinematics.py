"""3R serial chain: forward kinematics, Jacobians and the Euler step.

The end-effector orientation is parameterized with extrinsic XYZ angles
(rotation about the fixed x axis first, then y, then z), so the rotation
matrix factors as Rz(phi_z) @ Ry(phi_y) @ Rx(phi_x). The rate mapping is
singular at |cos(phi_y)| = 0 and raising there is preferred over silently
degrading.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidLink, SingularParameterization
from .geometry import ConvexHull, HomTransform

SINGULARITY_COS_TOL = 1e-6
N_JOINTS = 3


@dataclass(frozen=True)
class Joint:
    """Revolute joint: fixed parent-to-joint offset plus a unit rotation axis."""

    origin: HomTransform
    axis: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.axis, dtype=float).reshape(3)
        n = np.linalg.norm(a)
        if abs(n - 1.0) > 1e-12:
            raise ValueError(f"joint axis must be a unit vector, |a| = {n}")
        object.__setattr__(self, "axis", a)


@dataclass(frozen=True)
class Link:
    """Rigid body attached to a joint, carrying zero or more hulls."""

    name: str
    joint: int
    hulls: tuple[tuple[ConvexHull, HomTransform], ...]  # (hull, link-frame offset)


@dataclass(frozen=True)
class JointLimits:
    """Per-joint bounds; rows are joints, columns (lower, upper)."""

    position: np.ndarray      # rad
    velocity: np.ndarray      # rad/s
    acceleration: np.ndarray  # rad/s^2
    jerk: np.ndarray          # rad/s^3

    def __post_init__(self):
        for name in ("position", "velocity", "acceleration", "jerk"):
            v = np.asarray(getattr(self, name), dtype=float).reshape(N_JOINTS, 2)
            if not np.all(v[:, 0] < v[:, 1]):
                raise ValueError(f"{name} limits must satisfy lower < upper")
            object.__setattr__(self, name, v)


@dataclass(frozen=True)
class RobotModel:
    joints: tuple[Joint, ...]
    links: tuple[Link, ...]
    limits: JointLimits
    ee_origin: HomTransform
    ee_velocity_limit: np.ndarray = field(
        default_factory=lambda: np.full(3, np.inf))  # rad/s per angle
    ee_position_limits: np.ndarray = field(
        default_factory=lambda: np.array([[-np.inf, np.inf]] * 3))  # rad

    def __post_init__(self):
        if len(self.joints) != N_JOINTS:
            raise ValueError(f"model needs exactly {N_JOINTS} joints")
        for link in self.links:
            if not 0 <= link.joint < N_JOINTS:
                raise ValueError(f"link {link.name!r} attached to bad joint {link.joint}")
        object.__setattr__(self, "ee_velocity_limit",
                           np.asarray(self.ee_velocity_limit, dtype=float).reshape(3))
        object.__setattr__(self, "ee_position_limits",
                           np.asarray(self.ee_position_limits, dtype=float).reshape(3, 2))

    @property
    def hull_count(self) -> int:
        return sum(len(link.hulls) for link in self.links)


@dataclass(frozen=True)
class SystemState:
    """x = [x_e; q]: end-effector XYZ angles plus joint angles."""

    x_e: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x_e", np.asarray(self.x_e, dtype=float).reshape(3))
        object.__setattr__(self, "q", np.asarray(self.q, dtype=float).reshape(3))
        if not (np.all(np.isfinite(self.x_e)) and np.all(np.isfinite(self.q))):
            raise ValueError("state must be finite")

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.x_e, self.q])

    @staticmethod
    def from_vector(x: np.ndarray) -> "SystemState":
        x = np.asarray(x, dtype=float).reshape(6)
        return SystemState(x[:3], x[3:])


@dataclass(frozen=True)
class ControlInput:
    """u = joint velocities [rad/s]."""

    u: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float).reshape(3)
        if not np.all(np.isfinite(u)):
            raise ValueError("control input must be finite")
        object.__setattr__(self, "u", u)


def euler_xyz_from_matrix(R: np.ndarray) -> np.ndarray:
    """Extrinsic XYZ angles of R = Rz(c) @ Ry(b) @ Rx(a)."""
    b = math.asin(max(-1.0, min(1.0, -R[2, 0])))
    a = math.atan2(R[2, 1], R[2, 2])
    c = math.atan2(R[1, 0], R[0, 0])
    return np.array([a, b, c])


def matrix_from_euler_xyz(angles) -> np.ndarray:
    a, b, c = angles
    ca, sa = math.cos(a), math.sin(a)
    cb, sb = math.cos(b), math.sin(b)
    cc, sc = math.cos(c), math.sin(c)
    return np.array([
        [cc * cb, -sc * ca + cc * sb * sa, sc * sa + cc * sb * ca],
        [sc * cb, cc * ca + sc * sb * sa, -cc * sa + sc * sb * ca],
        [-sb, cb * sa, cb * ca],
    ])


def euler_rate_matrix(angles) -> np.ndarray:
    """E with omega = E @ d(angles)/dt for extrinsic XYZ angles."""
    a, b, c = angles
    cb, sb = math.cos(b), math.sin(b)
    cc, sc = math.cos(c), math.sin(c)
    # columns: world direction of each angle rate
    return np.array([
        [cc * cb, -sc, 0.0],
        [sc * cb, cc, 0.0],
        [-sb, 0.0, 1.0],
    ])


def joint_transforms(model: RobotModel, q) -> list[HomTransform]:
    """Pose of each joint frame (== its link frame) in the world."""
    q = np.asarray(q, dtype=float).reshape(3)
    out = []
    H = HomTransform.identity()
    for joint, qi in zip(model.joints, q):
        H = H @ joint.origin @ HomTransform.from_axis_angle(joint.axis, qi)
        out.append(H)
    return out


def forward_kinematics(model: RobotModel, q) -> tuple[list[HomTransform], np.ndarray]:
    """Per-link world transforms and the end-effector angles x_e."""
    frames = joint_transforms(model, q)
    link_tfs = [frames[link.joint] for link in model.links]
    ee = frames[-1] @ model.ee_origin
    return link_tfs, euler_xyz_from_matrix(ee.rotation)


def ee_transform(model: RobotModel, q) -> HomTransform:
    return joint_transforms(model, q)[-1] @ model.ee_origin


def _world_axes_and_origins(model: RobotModel, q):
    frames = joint_transforms(model, q)
    axes = [f.rotation @ j.axis for f, j in zip(frames, model.joints)]
    origins = [f.translation for f in frames]
    return frames, axes, origins


def jacobian_end_effector(model: RobotModel, q) -> np.ndarray:
    """Maps joint rates to d(x_e)/dt at configuration q."""
    frames, axes, _ = _world_axes_and_origins(model, q)
    ee = frames[-1] @ model.ee_origin
    phi = euler_xyz_from_matrix(ee.rotation)
    if abs(math.cos(phi[1])) < SINGULARITY_COS_TOL:
        raise SingularParameterization(
            f"XYZ angle rates undefined near phi_y = {phi[1]:.6f}")
    J_omega = np.column_stack(axes)
    return np.linalg.solve(euler_rate_matrix(phi), J_omega)


def jacobian_point(model: RobotModel, q, r_local, link_index: int) -> np.ndarray:
    """Maps joint rates to the world velocity of a point riding a link.

    ``r_local`` is expressed in the link frame. Joints downstream of the
    link's attachment contribute exactly zero columns.
    """
    if not 0 <= link_index < len(model.links):
        raise InvalidLink(f"link index {link_index} out of range")
    frames, axes, origins = _world_axes_and_origins(model, q)
    attach = model.links[link_index].joint
    p = frames[attach].apply(np.asarray(r_local, dtype=float).reshape(3))
    J = np.zeros((3, N_JOINTS))
    for j in range(attach + 1):
        J[:, j] = np.cross(axes[j], p - origins[j])
    return J


def velocity_kinematics(model: RobotModel):
    """f(x, u) for the 6-dim state: d[x_e; q]/dt = [J(q) u; u].

    Near the angle-parameterization singularity the x_e rows fall back to
    zero rate (the caller only ever needs q to pose geometry there).
    """
    def f(x: np.ndarray, u: np.ndarray) -> np.ndarray:
        q = np.asarray(x, dtype=float).reshape(6)[3:]
        u = np.asarray(u, dtype=float).reshape(3)
        try:
            xe_dot = jacobian_end_effector(model, q) @ u
        except SingularParameterization:
            xe_dot = np.zeros(3)
        return np.concatenate([xe_dot, u])

    return f


def euler_step(x, u, Ts: float, f) -> np.ndarray:
    """One forward-Euler step x + Ts * f(x, u)."""
    if Ts <= 0:
        raise ValueError("Ts must be positive")
    x = np.asarray(x, dtype=float)
    return x + Ts * np.asarray(f(x, u), dtype=float)


def state_from_q(model: RobotModel, q) -> SystemState:
    """FK-consistent state at joint angles q."""
    _, x_e = forward_kinematics(model, q)
    return SystemState(x_e, q)


def posed_link_hulls(model: RobotModel, q) -> list[list[ConvexHull]]:
    """World-frame hulls grouped by link at configuration q."""
    frames = joint_transforms(model, q)
    out = []
    for link in model.links:
        H_link = frames[link.joint]
        out.append([ConvexHull(h.id, (H_link @ off).apply(h.vertices))
                    for h, off in link.hulls])
    return out
