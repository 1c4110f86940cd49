"""Receding-horizon shared controller.

Every cycle: compute current and future closest-point tracks along the
previous plan, freeze the Jacobians at x(k), condense the Euler prediction
into affine maps of the stacked input, and solve one convex QP over the
inputs and the per-step distance slacks. The first input is applied; the
rest becomes the plan the next cycle predicts with.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import Infeasible, IterationLimit
from .geometry import ConvexHull, HomTransform
from .kinematics import RobotModel, SystemState, jacobian_end_effector, jacobian_point
from .prediction import (ClosestPointTrack, PredictionConfig, TrajectoryPlan,
                         future_closest_points)
from .qp import QpProblem, QpRow, solve_qp

DEFAULT_D_LB = 1.2e-1  # distance lower bound [m]; >= both tuned slack bounds


@dataclass(frozen=True)
class MpcConfig:
    N: int = 16
    Ts: float = 0.1
    Q: np.ndarray = field(default_factory=lambda: np.eye(3))
    R: np.ndarray = field(default_factory=lambda: 10.0 * np.eye(3))
    S: float = 1.8e5
    d_lb: float = DEFAULT_D_LB
    eps_ub: float = 5.2e-3
    use_future: bool = True
    prediction: PredictionConfig | None = None
    solver_tol: float = 1e-9

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if self.Ts <= 0:
            raise ValueError("Ts must be positive")
        Q = np.asarray(self.Q, dtype=float) * np.eye(3) if np.ndim(self.Q) == 0 \
            else np.asarray(self.Q, dtype=float).reshape(3, 3)
        R = np.asarray(self.R, dtype=float) * np.eye(3) if np.ndim(self.R) == 0 \
            else np.asarray(self.R, dtype=float).reshape(3, 3)
        for name, M in (("Q", Q), ("R", R)):
            if np.min(np.linalg.eigvalsh(0.5 * (M + M.T))) < -1e-12:
                raise ValueError(f"{name} must be positive semidefinite")
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "R", R)
        if self.S <= 0:
            raise ValueError("S must be positive")
        if not self.d_lb >= self.eps_ub >= 0:
            raise ValueError("need d_lb >= eps_ub >= 0")
        if self.prediction is None:
            object.__setattr__(self, "prediction",
                               PredictionConfig(N=self.N,
                                                future_steps=(max(1, self.N // 2),)))
        if self.prediction.N != self.N:
            raise ValueError("prediction horizon must match the MPC horizon")


@dataclass(frozen=True)
class DistanceModel:
    """Affine predicted-distance row: d_i = d0 + Ts * coef . sum_{j<i} u_j."""

    kind: str       # "current" or "future"
    link: int
    d0: float
    coef: np.ndarray  # (3,) = normalized gradient through the point Jacobian

    def predict(self, U: np.ndarray, i: int, Ts: float) -> float:
        if i == 0:
            return self.d0
        return float(self.d0 + Ts * self.coef @ U[:i].sum(axis=0))


@dataclass(frozen=True)
class LinearizedMaps:
    """Jacobians frozen at x(k) plus the distance models they induce."""

    J_e: np.ndarray
    models: tuple[DistanceModel, ...]


@dataclass
class ControlOutcome:
    u_applied: np.ndarray
    plan: TrajectoryPlan
    slack_max: float
    status: str                      # "optimal" or "infeasible"
    tracks: list[ClosestPointTrack]
    models: tuple[DistanceModel, ...]
    objective: float = float("nan")
    solve_time: float = 0.0

    @property
    def feasible(self) -> bool:
        return self.status == "optimal"

    def predicted_min_distance(self, i: int, Ts: float) -> float | None:
        """Smallest modeled distance at horizon step i under this plan."""
        if not self.models:
            return None
        return min(m.predict(self.plan.U, i, Ts) for m in self.models)


def linearize(x_k: SystemState, tracks: list[ClosestPointTrack],
              model: RobotModel, use_future: bool = True) -> LinearizedMaps:
    """Affine prediction maps with all Jacobians frozen at x(k)."""
    J_e = jacobian_end_effector(model, x_k.q)
    models = []
    for t in tracks:
        if t.has_current:
            g = t.grad_current / np.linalg.norm(t.grad_current)
            J_p = jacobian_point(model, x_k.q, t.r_current, t.link_index)
            models.append(DistanceModel("current", t.link_index,
                                        float(t.d_current), g @ J_p))
        if use_future and t.has_future:
            g = t.grad_future / np.linalg.norm(t.grad_future)
            J_p = jacobian_point(model, x_k.q, t.r_future, t.link_index)
            models.append(DistanceModel("future", t.link_index,
                                        float(t.d_future), g @ J_p))
    return LinearizedMaps(J_e, tuple(models))


def assemble_qp(x_k: SystemState, x_dot_desired: np.ndarray,
                tracks: list[ClosestPointTrack], cfg: MpcConfig,
                u_prev: np.ndarray, u_prev2: np.ndarray,
                model: RobotModel,
                lin: LinearizedMaps | None = None) -> QpProblem:
    """Condensed QP over z = [u_0..u_{N-1}, eps_0..eps_{N-1}]."""
    if lin is None:
        lin = linearize(x_k, tracks, model, cfg.use_future)
    N, Ts = cfg.N, cfg.Ts
    J = lin.J_e
    nu = 3 * N
    n = nu + N
    xd = np.asarray(x_dot_desired, dtype=float).reshape(3)
    u_prev = np.asarray(u_prev, dtype=float).reshape(3)
    u_prev2 = np.asarray(u_prev2, dtype=float).reshape(3)

    # --- cost: sum |J u_i - xd|_Q^2 + |du_i|_R^2 + S eps_i^2 ------------------
    H = np.zeros((n, n))
    g = np.zeros(n)
    JQJ = 2.0 * J.T @ cfg.Q @ J
    gq = -2.0 * J.T @ cfg.Q @ xd
    R2 = 2.0 * cfg.R
    for i in range(N):
        s = slice(3 * i, 3 * i + 3)
        H[s, s] += JQJ + R2
        g[s] += gq
        if i == 0:
            g[s] += -R2 @ u_prev
        else:
            p = slice(3 * (i - 1), 3 * i)
            H[p, p] += R2
            H[s, p] -= R2
            H[p, s] -= R2
        H[nu + i, nu + i] += 2.0 * cfg.S

    # --- constraints ----------------------------------------------------------
    G_rows: list[np.ndarray] = []
    h_vals: list[float] = []
    rows: list[QpRow] = []

    def add(coef: np.ndarray, rhs: float, kind: str, step: int, link: int = -1):
        G_rows.append(coef)
        h_vals.append(float(rhs))
        rows.append(QpRow(kind, step, link))

    lim = model.limits
    for i in range(N):
        b = 3 * i
        for c in range(3):
            # velocity box
            row = np.zeros(n); row[b + c] = 1.0
            add(row, lim.velocity[c, 1], "limit-velocity", i)
            row = np.zeros(n); row[b + c] = -1.0
            add(row, -lim.velocity[c, 0], "limit-velocity", i)
            # acceleration: (u_i - u_{i-1}) / Ts within bounds
            hist = u_prev[c] if i == 0 else 0.0
            row = np.zeros(n); row[b + c] = 1.0
            if i > 0:
                row[b - 3 + c] = -1.0
            add(row, lim.acceleration[c, 1] * Ts + hist, "limit-acceleration", i)
            row = -row
            add(row, -(lim.acceleration[c, 0] * Ts + hist), "limit-acceleration", i)
            # jerk: (u_i - 2 u_{i-1} + u_{i-2}) / Ts^2 within bounds
            row = np.zeros(n); row[b + c] = 1.0
            hist = 0.0
            if i == 0:
                hist = 2.0 * u_prev[c] - u_prev2[c]
            elif i == 1:
                row[b - 3 + c] = -2.0
                hist = -u_prev[c]
            else:
                row[b - 3 + c] = -2.0
                row[b - 6 + c] = 1.0
            add(row, lim.jerk[c, 1] * Ts ** 2 + hist, "limit-jerk", i)
            row = -row
            add(row, -(lim.jerk[c, 0] * Ts ** 2 + hist), "limit-jerk", i)
            # end-effector velocity box (J u_i within limits), when finite
            if np.isfinite(model.ee_velocity_limit[c]):
                row = np.zeros(n); row[b:b + 3] = J[c]
                add(row, model.ee_velocity_limit[c], "limit-ee-velocity", i)
                add(-row, model.ee_velocity_limit[c], "limit-ee-velocity", i)
        # slack bounds
        row = np.zeros(n); row[nu + i] = 1.0
        add(row, cfg.eps_ub, "slack-bound", i)
        add(-row, 0.0, "slack-bound", i)

    # positions over the horizon: q_i = q_k + Ts * sum_{j<i} u_j, i = 1..N
    for i in range(1, N + 1):
        for c in range(3):
            row = np.zeros(n)
            row[c:3 * i:3] = Ts
            add(row, lim.position[c, 1] - x_k.q[c], "limit-position", i)
            add(-row, x_k.q[c] - lim.position[c, 0], "limit-position", i)
            if np.isfinite(model.ee_position_limits[c]).all():
                row = np.zeros(n)
                for j in range(i):
                    row[3 * j:3 * j + 3] = Ts * J[c]
                add(row, model.ee_position_limits[c, 1] - x_k.x_e[c],
                    "limit-ee-position", i)
                add(-row, x_k.x_e[c] - model.ee_position_limits[c, 0],
                    "limit-ee-position", i)

    # distance rows: d_lb - eps_i <= d_i for each model, i = 0..N-1
    for mdl in lin.models:
        kind = f"distance-{mdl.kind}"
        for i in range(N):
            row = np.zeros(n)
            for j in range(i):
                row[3 * j:3 * j + 3] = -Ts * mdl.coef
            row[nu + i] = -1.0
            add(row, mdl.d0 - cfg.d_lb, kind, i, mdl.link)

    return QpProblem(H=H, g=g, G=np.array(G_rows).reshape(-1, n),
                     h=np.array(h_vals), rows=rows)


@dataclass
class ControllerMemory:
    plan: TrajectoryPlan
    u_prev: np.ndarray
    u_prev2: np.ndarray
    tracks: list[ClosestPointTrack]
    k: int = 0

    @staticmethod
    def initial(N: int) -> "ControllerMemory":
        return ControllerMemory(plan=TrajectoryPlan.zero(N),
                                u_prev=np.zeros(3), u_prev2=np.zeros(3),
                                tracks=[], k=0)


class Controller:
    """Owns one control timeline; ``control_step`` must be called serially."""

    def __init__(self, model: RobotModel, cfg: MpcConfig,
                 obstacles: list[tuple[ConvexHull, HomTransform]]):
        self.model = model
        self.cfg = cfg
        self.obstacles = list(obstacles)
        self.memory = ControllerMemory.initial(cfg.N)

    def control_step(self, x_k: SystemState,
                     x_dot_desired: np.ndarray) -> ControlOutcome:
        """One cycle: predict, linearize, assemble, solve, apply, store."""
        cfg, mem = self.cfg, self.memory
        t0 = time.perf_counter()
        if self.obstacles:
            tracks = future_closest_points(x_k, mem.plan, self.model,
                                           self.obstacles, cfg.prediction,
                                           mem.tracks, cfg.Ts)
        else:
            tracks = []
        lin = linearize(x_k, tracks, self.model, cfg.use_future)
        qp = assemble_qp(x_k, x_dot_desired, tracks, cfg,
                         mem.u_prev, mem.u_prev2, self.model, lin)
        try:
            z, _ = solve_qp(qp, cfg.solver_tol)
            u = z[:3].copy()
            plan = TrajectoryPlan(z[:3 * cfg.N].reshape(cfg.N, 3), mem.k)
            slack_max = float(z[3 * cfg.N:].max()) if cfg.N else 0.0
            outcome = ControlOutcome(u_applied=u, plan=plan, slack_max=slack_max,
                                     status="optimal", tracks=tracks,
                                     models=lin.models,
                                     objective=qp.objective(z),
                                     solve_time=time.perf_counter() - t0)
        except (Infeasible, IterationLimit):
            # safe stop: ramp to zero velocity at the acceleration limit; a
            # zero jump would violate the system's own deceleration capability
            a_max = self.model.limits.acceleration[:, 1] * cfg.Ts
            u = np.clip(np.zeros(3), mem.u_prev - a_max, mem.u_prev + a_max)
            plan_U = np.zeros((cfg.N, 3))
            for i in range(cfg.N):
                prev = u if i == 0 else plan_U[i - 1]
                plan_U[i] = np.clip(np.zeros(3), prev - a_max, prev + a_max)
            outcome = ControlOutcome(u_applied=u,
                                     plan=TrajectoryPlan(plan_U, mem.k),
                                     slack_max=0.0, status="infeasible",
                                     tracks=tracks, models=lin.models,
                                     solve_time=time.perf_counter() - t0)
        mem.plan = outcome.plan
        mem.u_prev2 = mem.u_prev
        mem.u_prev = outcome.u_applied
        mem.tracks = tracks
        mem.k += 1
        return outcome
