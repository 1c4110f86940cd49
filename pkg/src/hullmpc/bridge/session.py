"""Deterministic shared-control session core.

One session owns one control timeline: a held desired-velocity command
(latest sequence wins), the controller memory, and the simulated truth.
``tick()`` advances exactly one sample period; the network layer calls it on
the wall clock, tests call it directly. Everything here is synchronous and
reproducible: replaying the same command sequence at the same tick indices
yields identical snapshots.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..controller import Controller
from ..errors import SessionClosed
from ..geometry import transform_hull
from ..kinematics import joint_transforms, state_from_q
from ..simlab.scenario import Scenario

WATCHDOG_SECONDS = 0.5  # held command decays to zero after this long


@dataclass
class CommandAck:
    accepted: bool
    seq: int
    clamped: bool
    reason: str = ""

    def as_dict(self) -> dict:
        return {"type": "ack", "accepted": self.accepted, "seq": self.seq,
                "clamped": self.clamped, "reason": self.reason}


class SessionCore:
    def __init__(self, scenario: Scenario, arm: str = "new"):
        self.scenario = scenario
        self.arm = arm
        self.cfg = scenario.mpc_config(arm)
        self.controller = Controller(scenario.robot, self.cfg, scenario.obstacles)
        self.state = state_from_q(scenario.robot, scenario.initial_q)
        self.tick_index = 0
        self.command = np.zeros(3)
        self.command_seq = -1
        self._last_fresh_tick: int | None = None
        self._watchdog_ticks = max(1, int(round(WATCHDOG_SECONDS / self.cfg.Ts)))
        self.overruns = 0
        self.closed = False

    # -- commands -------------------------------------------------------------
    def submit_command(self, xdot, seq: int) -> CommandAck:
        """Clamp to the advertised limits and keep it if the sequence is new."""
        if self.closed:
            raise SessionClosed("session is closed")
        if seq <= self.command_seq:
            return CommandAck(accepted=False, seq=seq, clamped=False,
                              reason="stale sequence")
        xdot = np.asarray(xdot, dtype=float).reshape(3)
        limit = self.scenario.robot.ee_velocity_limit
        clamped = np.clip(xdot, -limit, limit)
        self.command = clamped
        self.command_seq = seq
        self._last_fresh_tick = self.tick_index
        return CommandAck(accepted=True, seq=seq,
                          clamped=bool(np.any(clamped != xdot)))

    def _held_command(self) -> np.ndarray:
        if self._last_fresh_tick is None:
            return np.zeros(3)
        if self.tick_index - self._last_fresh_tick >= self._watchdog_ticks:
            return np.zeros(3)  # dead-man: stale command decays to zero
        return self.command

    # -- control timeline -----------------------------------------------------
    def tick(self) -> dict:
        """One control cycle plus one Euler step of the truth; returns the snapshot."""
        if self.closed:
            raise SessionClosed("session is closed")
        xd = self._held_command()
        outcome = self.controller.control_step(self.state, xd)
        self.state = state_from_q(self.scenario.robot,
                                  self.state.q + self.cfg.Ts * outcome.u_applied)
        self.tick_index += 1
        return self._snapshot(outcome)

    def _snapshot(self, outcome) -> dict:
        robot = self.scenario.robot
        frames = joint_transforms(robot, self.state.q)
        poses = {}
        collision = False
        for link in robot.links:
            H_link = frames[link.joint]
            for hull, off in link.hulls:
                H = H_link @ off
                poses[hull.id] = {"R": [[float(v) for v in row] for row in H.rotation],
                                  "t": [float(v) for v in H.translation]}
        tracks = []
        for t in outcome.tracks:
            tracks.append({
                "link": t.link_index,
                "p_robot": _vec(t.p_current),
                "p_obst": _vec(None if t.p_current is None or t.grad_current is None
                               else t.p_current - t.grad_current),
                "d": None if t.d_current is None else float(t.d_current),
                "p_robot_future": _vec(t.p_future),
                "d_future": None if t.d_future is None else float(t.d_future),
            })
            collision = collision or t.collision_current
        return {
            "type": "snapshot",
            "tick": self.tick_index,
            "t": round(self.tick_index * self.cfg.Ts, 9),
            "q": _vec(self.state.q),
            "xe": _vec(self.state.x_e),
            "u": _vec(outcome.u_applied),
            "tracks": tracks,
            "slack": float(outcome.slack_max),
            "status": outcome.status,
            "collision": collision,
            "seq": self.command_seq,
            "poses": poses,
        }

    def scene_message(self) -> dict:
        robot = self.scenario.robot
        return {
            "type": "scene",
            "Ts": self.cfg.Ts,
            "controller": self.arm,
            "robot": {
                "links": [{
                    "id": link.name,
                    "hulls": [{"id": hull.id,
                               "vertices": [[float(c) for c in v]
                                            for v in hull.vertices]}
                              for hull, _ in link.hulls],
                } for link in robot.links],
            },
            "obstacles": [{
                "id": hull.id,
                "vertices": [[float(c) for c in v]
                             for v in transform_hull(hull, pose).vertices],
            } for hull, pose in self.scenario.obstacles],
            "limits": {"ee_velocity": _vec(robot.ee_velocity_limit)},
        }

    def close(self):
        self.closed = True


def _vec(v) -> list | None:
    return None if v is None else [float(x) for x in np.asarray(v).reshape(-1)]
