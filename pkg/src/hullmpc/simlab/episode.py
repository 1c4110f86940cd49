"""Closed-loop episode execution, metrics and prediction-error profiling."""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from ..controller import Controller
from ..geometry import distance, transform_hull
from ..kinematics import posed_link_hulls, state_from_q
from .scenario import Scenario, ScriptStep, generate_step_inputs

LOG_COLUMNS = ("time", "q1", "q2", "q3", "u1", "u2", "u3",
               "min_dist", "slack_max", "collision")
METRIC_NAMES = ("d_ob", "t_ob", "f_ps", "f_vs", "f_vt", "t_c", "collisions")


@dataclass
class MetricsReport:
    d_ob: float        # mean minimal hull-obstacle distance [m]
    t_ob: float        # % of time spent within d_min of an obstacle
    f_ps: float        # pose smoothness: path-normalized second differences
    f_vs: float        # velocity smoothness: mean |du|/Ts
    f_vt: float        # velocity tracking: mean |xe_dot - xd|
    t_c: float         # mean control_step wall time [ms]
    collisions: int    # executed states with any colliding pair

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in METRIC_NAMES}


@dataclass
class PredictionErrorProfile:
    mean_err: np.ndarray  # (N,), index i-1 holds horizon step i
    sd_err: np.ndarray
    counts: np.ndarray

    @property
    def N(self) -> int:
        return len(self.mean_err)


@dataclass
class EpisodeResult:
    rows: list[tuple]           # CSV rows per LOG_COLUMNS
    outcomes: list
    metrics: MetricsReport
    profile: PredictionErrorProfile
    script: list[ScriptStep]
    infeasible_cycles: int = 0


def _scene_min_distance(robot, q, obstacles_global) -> tuple[float, bool]:
    """Minimal distance over all hull-obstacle pairs; 0.0 when colliding."""
    best = np.inf
    hit = False
    for link_hulls in posed_link_hulls(robot, q):
        for h in link_hulls:
            for obst in obstacles_global:
                res = distance(h, obst)
                if res.collision:
                    return 0.0, True
                best = min(best, res.distance)
    return float(best), hit


def run_episode(scenario: Scenario, arm: str = "new",
                script: list[ScriptStep] | None = None,
                collect_profile: bool = True) -> EpisodeResult:
    """Simulate one episode: truth integrates the applied input at Ts.

    Collisions are recorded, never fatal, so baseline comparisons complete.
    """
    cfg = scenario.mpc_config(arm)
    robot = scenario.robot
    if script is None:
        script = scenario.script
    if script is None:
        script = generate_step_inputs(scenario.seed,
                                      scenario.script_config["count"],
                                      tuple(scenario.script_config["magnitude"]),
                                      tuple(scenario.script_config["axes"]),
                                      scenario.episode_length)
    ctrl = Controller(robot, cfg, scenario.obstacles)
    obstacles_global = [transform_hull(h, H) for h, H in scenario.obstacles]

    K = int(round(scenario.episode_length / cfg.Ts))
    x = state_from_q(robot, scenario.initial_q)
    d0, hit0 = _scene_min_distance(robot, x.q, obstacles_global)
    rows = [(0.0, *x.q, 0.0, 0.0, 0.0, d0, 0.0, int(hit0))]
    outcomes = []
    xd_log = []
    xe_log = [x.x_e.copy()]

    N = cfg.N
    err_sum = np.zeros(N)
    err_sqsum = np.zeros(N)
    err_count = np.zeros(N, dtype=int)
    infeasible = 0

    for k in range(K):
        t = k * cfg.Ts
        xd = scenario.desired_velocity(t, script)
        t0 = time.perf_counter()
        out = ctrl.control_step(x, xd)
        out.solve_time = time.perf_counter() - t0
        outcomes.append(out)
        xd_log.append(xd)
        if not out.feasible:
            infeasible += 1

        if collect_profile and out.models:
            # evolve a copy of the truth under the freshly planned sequence
            q_pred = x.q + cfg.Ts * np.cumsum(out.plan.U, axis=0)
            for i in range(1, N + 1):
                predicted = out.predicted_min_distance(i, cfg.Ts)
                actual, _ = _scene_min_distance(robot, q_pred[i - 1],
                                                obstacles_global)
                err = abs(predicted - actual)
                err_sum[i - 1] += err
                err_sqsum[i - 1] += err * err
                err_count[i - 1] += 1

        x = state_from_q(robot, x.q + cfg.Ts * out.u_applied)
        xe_log.append(x.x_e.copy())
        dmin, hit = _scene_min_distance(robot, x.q, obstacles_global)
        rows.append(((k + 1) * cfg.Ts, *x.q, *out.u_applied,
                     dmin, out.slack_max, int(hit)))

    metrics = _metrics(rows, outcomes, xd_log, xe_log, cfg.Ts,
                       scenario.controller["d_min"])
    with np.errstate(invalid="ignore"):
        mean = np.where(err_count > 0, err_sum / np.maximum(err_count, 1), np.nan)
        var = np.where(err_count > 0,
                       err_sqsum / np.maximum(err_count, 1) - mean ** 2, np.nan)
    sd = np.sqrt(np.maximum(var, 0.0))
    profile = PredictionErrorProfile(mean_err=mean, sd_err=sd, counts=err_count)
    return EpisodeResult(rows=rows, outcomes=outcomes, metrics=metrics,
                         profile=profile, script=list(script),
                         infeasible_cycles=infeasible)


def _metrics(rows, outcomes, xd_log, xe_log, Ts, d_min) -> MetricsReport:
    q = np.array([r[1:4] for r in rows])
    u = np.array([o.u_applied for o in outcomes])
    dmin = np.array([r[7] for r in rows])
    collisions = int(sum(r[9] for r in rows))

    d_ob = float(dmin.mean())
    t_ob = float(100.0 * np.mean(dmin <= d_min))

    if len(q) >= 3:
        second = np.linalg.norm(q[2:] - 2 * q[1:-1] + q[:-2], axis=1) / Ts ** 2
        path = float(np.linalg.norm(np.diff(q, axis=0), axis=1).sum())
        f_ps = float(second.mean() / path) if path > 1e-9 else 0.0
    else:
        f_ps = 0.0

    if len(u) >= 2:
        f_vs = float(np.linalg.norm(np.diff(u, axis=0), axis=1).mean() / Ts)
    else:
        f_vs = 0.0

    xe = np.array(xe_log)
    xe_dot = np.diff(xe, axis=0) / Ts
    xd = np.array(xd_log)
    f_vt = float(np.linalg.norm(xe_dot - xd, axis=1).mean()) if len(xd) else 0.0

    t_c = float(1e3 * np.mean([o.solve_time for o in outcomes])) if outcomes else 0.0
    return MetricsReport(d_ob=d_ob, t_ob=t_ob, f_ps=f_ps, f_vs=f_vs, f_vt=f_vt,
                         t_c=t_c, collisions=collisions)


def run_batch(scenario: Scenario, arm: str, episodes: int, seed: int | None = None,
              collect_profile: bool = True) -> list[EpisodeResult]:
    """Independent episodes differing only by their generated step scripts."""
    base_seed = scenario.seed if seed is None else seed
    results = []
    for e in range(episodes):
        script = generate_step_inputs(base_seed + e,
                                      scenario.script_config["count"],
                                      tuple(scenario.script_config["magnitude"]),
                                      tuple(scenario.script_config["axes"]),
                                      scenario.episode_length)
        results.append(run_episode(scenario, arm, script=script,
                                   collect_profile=collect_profile))
    return results


def aggregate_profile(results: list[EpisodeResult]) -> PredictionErrorProfile:
    """Pooled per-step mean and SD across episodes."""
    N = results[0].profile.N
    total = np.zeros(N)
    total_sq = np.zeros(N)
    count = np.zeros(N, dtype=int)
    for r in results:
        p = r.profile
        ok = p.counts > 0
        total[ok] += p.mean_err[ok] * p.counts[ok]
        total_sq[ok] += (p.sd_err[ok] ** 2 + p.mean_err[ok] ** 2) * p.counts[ok]
        count += p.counts
    with np.errstate(invalid="ignore"):
        mean = np.where(count > 0, total / np.maximum(count, 1), np.nan)
        var = np.where(count > 0, total_sq / np.maximum(count, 1) - mean ** 2, np.nan)
    return PredictionErrorProfile(mean_err=mean,
                                  sd_err=np.sqrt(np.maximum(var, 0.0)),
                                  counts=count)
