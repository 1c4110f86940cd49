"""Future closest points along the previous plan, point smoothing and the
linear distance predictions they feed.

Each control cycle, the previous plan is rolled out, every link's hulls are
posed at the selected future steps, and the witness point found there is
dragged back onto the link at the current configuration. The distance and
gradient of that re-posed point against the obstacles is what the controller
constrains, alongside the plain current closest points (the i = 0 case of
the same machinery).
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .errors import MaxShrinkIterations, ZeroGradient
from .geometry import (ConvexHull, HomTransform, closest_obstacle,
                       point_result, shrink_closest_point, transform_hull)
from .kinematics import (RobotModel, SystemState, euler_step, joint_transforms,
                         velocity_kinematics)

DEFAULT_D_MIN = 2.5e-2  # smoothing threshold [m]


@dataclass(frozen=True)
class TrajectoryPlan:
    """Input sequence u_0 .. u_{N-1} kept from the previous cycle."""

    U: np.ndarray  # (N, 3)
    k: int = 0

    def __post_init__(self):
        U = np.asarray(self.U, dtype=float)
        if U.ndim != 2 or U.shape[1] != 3:
            raise ValueError("plan must have shape (N, 3)")
        if not np.all(np.isfinite(U)):
            raise ValueError("plan must be finite")
        object.__setattr__(self, "U", U)

    @staticmethod
    def zero(N: int, k: int = 0) -> "TrajectoryPlan":
        return TrajectoryPlan(np.zeros((N, 3)), k)

    def __len__(self) -> int:
        return len(self.U)


@dataclass(frozen=True)
class PredictionConfig:
    N: int = 16
    future_steps: tuple[int, ...] = (8,)
    d_min: float = DEFAULT_D_MIN
    gamma0: float = 0.5

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be >= 1")
        steps = tuple(int(s) for s in self.future_steps)
        if any(not 1 <= s <= self.N for s in steps):
            raise ValueError("every future step must lie in [1, N]")
        if self.d_min <= 0:
            raise ValueError("d_min must be positive")
        if not 0.0 < self.gamma0 < 1.0:
            raise ValueError("gamma0 must be in (0, 1)")
        object.__setattr__(self, "future_steps", steps)


@dataclass
class ClosestPointTrack:
    """Current and future closest-point data for one link at one future step."""

    link_index: int
    n_i: int
    obstacle_index: int = -1          # obstacle of the future pair
    obstacle_index_current: int = -1  # obstacle of the current pair
    r_current: np.ndarray | None = None   # link frame
    r_future: np.ndarray | None = None    # link frame, after smoothing
    p_current: np.ndarray | None = None   # global witness on the link
    p_future: np.ndarray | None = None    # global re-posed future point
    d_current: float | None = None
    d_future: float | None = None
    grad_current: np.ndarray | None = None
    grad_future: np.ndarray | None = None
    r_current_prev: np.ndarray | None = None
    r_future_prev: np.ndarray | None = None
    collision_current: bool = False
    future_degraded: bool = False

    @property
    def has_current(self) -> bool:
        return not self.collision_current and self.d_current is not None

    @property
    def has_future(self) -> bool:
        return not self.future_degraded and self.d_future is not None


def rollout(model: RobotModel, x_k: SystemState, plan: TrajectoryPlan,
            N: int, Ts: float = 0.1) -> list[np.ndarray]:
    """States x_{0|k} .. x_{N|k} under the previous plan.

    Step i consumes u_{i|k-1}: plan entry 0 was already applied to reach
    x(k), and the final step holds the last entry.
    """
    if len(plan) < N:
        raise ValueError(f"plan of length {len(plan)} cannot roll out horizon {N}")
    f = velocity_kinematics(model)
    xs = [x_k.as_vector()]
    for i in range(1, N + 1):
        u = plan.U[min(i, len(plan) - 1)]
        xs.append(euler_step(xs[-1], u, Ts, f))
    return xs


def predict_distance(d0: float, grad: np.ndarray, p_future: np.ndarray,
                     p_now: np.ndarray) -> float:
    """First-order distance update along the normalized gradient."""
    g = np.asarray(grad, dtype=float)
    n = np.linalg.norm(g)
    if n == 0.0:
        raise ZeroGradient("cannot predict distance with a zero gradient")
    return float(d0 + (g / n) @ (np.asarray(p_future, float) - np.asarray(p_now, float)))


def smooth_point(r_future, r_current, r_current_prev, r_future_prev,
                 d_min: float) -> np.ndarray:
    """Hysteresis rule for the future point when it crowds the current one.

    If the two points nearly coincide, whichever of them moved more since
    the last cycle is treated as the jumper and the corresponding previous
    point is reused.
    """
    r_future = np.asarray(r_future, float)
    if r_current is None or r_current_prev is None or r_future_prev is None:
        return r_future  # first cycle: nothing to smooth against
    d_r = np.linalg.norm(r_future - r_current)
    if d_r >= d_min:
        return r_future
    d_c_current = np.linalg.norm(np.asarray(r_current) - np.asarray(r_current_prev))
    d_c_future = np.linalg.norm(r_future - np.asarray(r_future_prev))
    if d_c_future > d_c_current:
        return np.asarray(r_future_prev, float)   # future point jumped onto current
    return np.asarray(r_current_prev, float)      # current point jumped onto future


def smooth(track: ClosestPointTrack, d_min: float = DEFAULT_D_MIN) -> ClosestPointTrack:
    """Track-level wrapper around ``smooth_point``."""
    if track.r_future is None:
        return track
    r = smooth_point(track.r_future, track.r_current,
                     track.r_current_prev, track.r_future_prev, d_min)
    return dataclasses.replace(track, r_future=r)


def _link_closest(posed_hulls, obstacles_global):
    """Best (hull index, obstacle index, result) over one link's hulls."""
    best = None
    for hull_idx, hull_global in enumerate(posed_hulls):
        m, res = closest_obstacle(hull_global, obstacles_global)
        if res.collision:
            return hull_idx, m, res
        if best is None or res.distance < best[2].distance:
            best = (hull_idx, m, res)
    return best


def future_closest_points(x_k: SystemState, plan: TrajectoryPlan,
                          robot: RobotModel,
                          obstacles: list[tuple[ConvexHull, HomTransform]],
                          cfg: PredictionConfig,
                          prev_tracks: list[ClosestPointTrack] | None = None,
                          Ts: float = 0.1) -> list[ClosestPointTrack]:
    """Per-link current and future closest points along the previous plan.

    ``obstacles`` carries local centroid-origin hulls with their fixed world
    poses (the shrinking fallback needs both). Shrink failures degrade the
    affected track instead of aborting the cycle.
    """
    obstacles_global = [transform_hull(h, H) for h, H in obstacles]
    prev_by_key = {}
    for t in prev_tracks or []:
        prev_by_key[(t.link_index, t.n_i)] = t

    states = rollout(robot, x_k, plan, cfg.N, Ts)
    frames_now = joint_transforms(robot, x_k.q)

    tracks: list[ClosestPointTrack] = []
    for link_idx, link in enumerate(robot.links):
        if not link.hulls:
            continue
        H_link_now = frames_now[link.joint]
        posed_now = [transform_hull(h, H_link_now @ off) for h, off in link.hulls]

        # current closest point: the i = 0 case, no smoothing, no re-posing
        cur_hull, cur_obst, cur_res = _link_closest(posed_now, obstacles_global)
        collision_current = cur_res.collision
        if not collision_current:
            r_current = H_link_now.inverse().apply(cur_res.p_robot)
            p_current = cur_res.p_robot
            d_current, grad_current = cur_res.distance, cur_res.gradient
        else:
            d_current = grad_current = None
            p_current = None
            r_current = _shrink_or_none(x_k, robot, link, cur_hull, obstacles,
                                        cur_obst, frames_now[link.joint], cfg.gamma0)

        for n_i in cfg.future_steps:
            prev = prev_by_key.get((link_idx, n_i))
            track = ClosestPointTrack(
                link_index=link_idx, n_i=n_i,
                obstacle_index_current=cur_obst,
                r_current=r_current, p_current=p_current,
                d_current=d_current, grad_current=grad_current,
                collision_current=collision_current,
                r_current_prev=None if prev is None else prev.r_current,
                r_future_prev=None if prev is None else prev.r_future,
            )
            _fill_future(track, states[n_i], robot, link, obstacles,
                         obstacles_global, cfg, frames_now)
            tracks.append(track)
    return tracks


def _shrink_or_none(x_k, robot, link, hull_idx, obstacles, obst_idx, H_link, gamma0):
    hull, off = link.hulls[hull_idx]
    obst_hull, obst_pose = obstacles[obst_idx]
    try:
        r_hull, _ = shrink_closest_point(x_k, hull, obst_hull,
                                         H_link @ off, obst_pose, gamma0)
    except MaxShrinkIterations:
        return None
    return off.apply(r_hull)  # hull frame -> link frame


def _fill_future(track: ClosestPointTrack, x_pred_vec: np.ndarray,
                 robot: RobotModel, link, obstacles, obstacles_global,
                 cfg: PredictionConfig, frames_now):
    x_pred = SystemState.from_vector(x_pred_vec)
    frames_pred = joint_transforms(robot, x_pred.q)
    H_link_pred = frames_pred[link.joint]
    posed_pred = [transform_hull(h, H_link_pred @ off) for h, off in link.hulls]
    hull_idx, obst_idx, res = _link_closest(posed_pred, obstacles_global)
    track.obstacle_index = obst_idx

    if res.collision:
        hull, off = link.hulls[hull_idx]
        obst_hull, obst_pose = obstacles[obst_idx]
        try:
            r_hull, _ = shrink_closest_point(x_pred, hull, obst_hull,
                                             H_link_pred @ off, obst_pose,
                                             cfg.gamma0)
        except MaxShrinkIterations:
            _degrade(track)
            return
        r_future = off.apply(r_hull)
    else:
        r_future = H_link_pred.inverse().apply(res.p_robot)

    track.r_future = r_future
    smoothed = smooth(track, cfg.d_min)
    track.r_future = smoothed.r_future

    # re-pose at the current configuration and measure its distance now
    H_link_now = frames_now[link.joint]
    p_future = H_link_now.apply(track.r_future)
    m_now, res_now = point_result(p_future, obstacles_global)
    if res_now.collision:
        _degrade(track)
        return
    track.p_future = p_future
    track.d_future = res_now.distance
    track.grad_future = res_now.gradient
    track.obstacle_index = m_now


def _degrade(track: ClosestPointTrack):
    """Shrink/collision fallback: drop the future constraint for one cycle."""
    track.future_degraded = True
    track.r_future = None if track.r_current is None else np.array(track.r_current)
    track.p_future = None
    track.d_future = None
    track.grad_future = None
