"""Convex hulls, rigid transforms and the closest-point result type."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ZeroDirection

_ORTHO_TOL = 1e-9


@dataclass(frozen=True)
class HomTransform:
    """Homogeneous transform: p_world = rotation @ p_local + translation."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        R = np.asarray(self.rotation, dtype=float).reshape(3, 3)
        t = np.asarray(self.translation, dtype=float).reshape(3)
        object.__setattr__(self, "rotation", R)
        object.__setattr__(self, "translation", t)
        if not np.all(np.isfinite(R)) or not np.all(np.isfinite(t)):
            raise ValueError("transform contains non-finite entries")
        err = np.max(np.abs(R.T @ R - np.eye(3)))
        if err > _ORTHO_TOL or abs(np.linalg.det(R) - 1.0) > _ORTHO_TOL:
            raise ValueError(f"rotation is not orthonormal with det +1 (residual {err:.2e})")

    @classmethod
    def _trusted(cls, R: np.ndarray, t: np.ndarray) -> "HomTransform":
        # products/inverses of valid transforms stay orthonormal; skip the
        # validation pass, which dominates tight kinematics loops otherwise
        obj = object.__new__(cls)
        object.__setattr__(obj, "rotation", R)
        object.__setattr__(obj, "translation", t)
        return obj

    @staticmethod
    def identity() -> "HomTransform":
        return HomTransform._trusted(np.eye(3), np.zeros(3))

    @staticmethod
    def from_translation(t) -> "HomTransform":
        return HomTransform._trusted(np.eye(3), np.asarray(t, dtype=float).reshape(3))

    @staticmethod
    def from_axis_angle(axis, angle: float, translation=(0.0, 0.0, 0.0)) -> "HomTransform":
        return HomTransform._trusted(rotation_about(axis, angle),
                                     np.asarray(translation, dtype=float).reshape(3))

    def apply(self, points: np.ndarray) -> np.ndarray:
        """Map local points (3,) or (n, 3) to the parent frame."""
        p = np.asarray(points, dtype=float)
        return p @ self.rotation.T + self.translation

    def compose(self, other: "HomTransform") -> "HomTransform":
        """self ∘ other: apply ``other`` first, then ``self``."""
        return HomTransform._trusted(self.rotation @ other.rotation,
                                     self.rotation @ other.translation + self.translation)

    def __matmul__(self, other: "HomTransform") -> "HomTransform":
        return self.compose(other)

    def inverse(self) -> "HomTransform":
        Rt = np.ascontiguousarray(self.rotation.T)
        return HomTransform._trusted(Rt, -Rt @ self.translation)


def rotation_about(axis, angle: float) -> np.ndarray:
    """Rodrigues rotation matrix about a (not necessarily unit) axis."""
    a = np.asarray(axis, dtype=float)
    n = np.linalg.norm(a)
    if n == 0.0:
        raise ValueError("rotation axis must be nonzero")
    a = a / n
    K = np.array([[0.0, -a[2], a[1]],
                  [a[2], 0.0, -a[0]],
                  [-a[1], a[0], 0.0]])
    return np.eye(3) + np.sin(angle) * K + (1.0 - np.cos(angle)) * (K @ K)


@dataclass(frozen=True)
class ConvexHull:
    """Vertex cloud whose implicit convex hull is the collision shape.

    Vertices are stored in the hull's own frame. For hulls attached to a
    robot/obstacle model the local frame origin sits at the centroid, so a
    scale about the origin scales about the geometric center.
    """

    id: str
    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float).reshape(-1, 3)
        if v.shape[0] < 1:
            raise ValueError("hull needs at least one vertex")
        if not np.all(np.isfinite(v)):
            raise ValueError("hull vertices must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @property
    def centroid(self) -> np.ndarray:
        return self.vertices.mean(axis=0)

    def recentred(self) -> tuple["ConvexHull", np.ndarray]:
        """Return (hull with centroid-origin local frame, removed offset)."""
        c = self.centroid
        return ConvexHull(self.id, self.vertices - c), c

    def scaled(self, factor: float) -> "ConvexHull":
        """Scale about the local origin (the centroid for model hulls)."""
        return ConvexHull(self.id, self.vertices * factor)


@dataclass(frozen=True)
class ClosestPointResult:
    """Witness pair of a disjoint hull pair, or a bare collision flag.

    gradient = p_robot - p_obstacle, so its norm equals the distance and its
    direction is the one that increases the distance.
    """

    collision: bool
    distance: float | None = None
    p_robot: np.ndarray | None = None
    p_obstacle: np.ndarray | None = None
    gradient: np.ndarray | None = field(default=None)

    @staticmethod
    def colliding() -> "ClosestPointResult":
        return ClosestPointResult(collision=True)

    @staticmethod
    def disjoint(p_robot: np.ndarray, p_obstacle: np.ndarray) -> "ClosestPointResult":
        grad = p_robot - p_obstacle
        return ClosestPointResult(collision=False,
                                  distance=float(np.linalg.norm(grad)),
                                  p_robot=p_robot, p_obstacle=p_obstacle,
                                  gradient=grad)


def support(hull: ConvexHull, direction) -> np.ndarray:
    """Vertex maximizing the dot product; ties go to the lowest index."""
    d = np.asarray(direction, dtype=float)
    if not np.any(d):
        raise ZeroDirection("support direction must be nonzero")
    # argmax returns the first maximal index, which is the tie-break we want
    return hull.vertices[int(np.argmax(hull.vertices @ d))]


def transform_hull(hull: ConvexHull, H: HomTransform) -> ConvexHull:
    """Express every vertex of ``hull`` in the parent frame of ``H``."""
    return ConvexHull(hull.id, H.apply(hull.vertices))
