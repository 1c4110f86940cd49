"""Scenario files: schema, validation and loading.

A scenario is a single JSON document with sections ``robot``, ``obstacles``,
``controller``, ``script`` (or ``script_config``) and ``seed``. Lengths are
meters, angles radians, times seconds. Hull centroids are recomputed on
load and folded into the hull offsets so local frames are centroid-origin.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..controller import DEFAULT_D_LB, MpcConfig
from ..errors import ParseError, ValidationError
from ..geometry import ConvexHull, HomTransform, rotation_about
from ..kinematics import Joint, JointLimits, Link, RobotModel
from ..prediction import DEFAULT_D_MIN, PredictionConfig

ARM_DEFAULTS = {
    "base": {"S": 1.1e5, "eps_ub": 1.2e-1, "use_future": False},
    "new": {"S": 1.8e5, "eps_ub": 5.2e-3, "use_future": True},
}


@dataclass(frozen=True)
class ScriptStep:
    start: float
    duration: float
    xdot: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "xdot", np.asarray(self.xdot, dtype=float).reshape(3))


@dataclass
class Scenario:
    name: str
    robot: RobotModel
    obstacles: list[tuple[ConvexHull, HomTransform]]
    initial_q: np.ndarray
    episode_length: float
    seed: int
    script: list[ScriptStep] | None
    script_config: dict
    controller: dict   # common controller settings + per-arm overrides

    def mpc_config(self, arm: str = "new") -> MpcConfig:
        if arm not in ("base", "new"):
            raise ValidationError(f"controller arm must be 'base' or 'new', got {arm!r}")
        c = self.controller
        arm_cfg = {**ARM_DEFAULTS[arm], **c.get("arms", {}).get(arm, {})}
        pred = PredictionConfig(N=c["N"], future_steps=tuple(c["future_steps"]),
                                d_min=c["d_min"], gamma0=c["gamma0"])
        return MpcConfig(N=c["N"], Ts=c["Ts"], Q=c["Q"], R=c["R"],
                         S=arm_cfg["S"], d_lb=c["d_lb"], eps_ub=arm_cfg["eps_ub"],
                         use_future=arm_cfg["use_future"], prediction=pred)

    def desired_velocity(self, t: float, script: list[ScriptStep] | None = None
                         ) -> np.ndarray:
        for step in (script if script is not None else self.script) or []:
            if step.start <= t < step.start + step.duration:
                return step.xdot
        return np.zeros(3)


def _req(obj: dict, key: str, where: str):
    if key not in obj:
        raise ValidationError(f"{where}: missing required field {key!r}")
    return obj[key]


def _transform(spec: dict | None, where: str) -> HomTransform:
    if spec is None:
        return HomTransform.identity()
    xyz = np.asarray(spec.get("xyz", [0.0, 0.0, 0.0]), dtype=float)
    rpy = np.asarray(spec.get("rpy", [0.0, 0.0, 0.0]), dtype=float)
    if xyz.shape != (3,) or rpy.shape != (3,):
        raise ValidationError(f"{where}: xyz/rpy must be 3-vectors")
    R = (rotation_about((0, 0, 1), rpy[2]) @ rotation_about((0, 1, 0), rpy[1])
         @ rotation_about((1, 0, 0), rpy[0]))
    return HomTransform(R, xyz)


def _hull(node: dict, where: str) -> tuple[ConvexHull, HomTransform]:
    hid = _req(node, "id", where)
    verts = np.asarray(_req(node, "vertices", where), dtype=float)
    if verts.ndim != 2 or verts.shape[1] != 3 or verts.shape[0] < 1:
        raise ValidationError(f"{where}: vertices must be a non-empty (n, 3) list")
    if not np.all(np.isfinite(verts)):
        raise ValidationError(f"{where}: vertices must be finite")
    origin = _transform(node.get("origin"), where)
    # recompute the centroid and fold it into the offset: local frames are
    # centroid-origin so the shrinking fallback scales about the center
    hull, center = ConvexHull(hid, verts).recentred()
    return hull, origin @ HomTransform.from_translation(center)


def _robot(node: dict) -> RobotModel:
    joints_spec = _req(node, "joints", "robot")
    if len(joints_spec) != 3:
        raise ValidationError(f"robot.joints: expected exactly 3 joints, got {len(joints_spec)}")
    joints = []
    for i, js in enumerate(joints_spec):
        axis = np.asarray(_req(js, "axis", f"robot.joints[{i}]"), dtype=float)
        n = np.linalg.norm(axis)
        if n == 0:
            raise ValidationError(f"robot.joints[{i}]: axis must be nonzero")
        joints.append(Joint(_transform(js.get("origin"), f"robot.joints[{i}]"),
                            axis / n))
    links = []
    for li, ls in enumerate(_req(node, "links", "robot")):
        where = f"robot.links[{li}]"
        joint = int(_req(ls, "joint", where))
        if not 0 <= joint < 3:
            raise ValidationError(f"{where}: joint index out of range")
        hulls = tuple(_hull(hs, f"{where}.hulls[{hi}]")
                      for hi, hs in enumerate(ls.get("hulls", [])))
        links.append(Link(str(_req(ls, "name", where)), joint, hulls))
    lim_spec = _req(node, "limits", "robot")
    try:
        limits = JointLimits(
            position=_req(lim_spec, "position", "robot.limits"),
            velocity=_req(lim_spec, "velocity", "robot.limits"),
            acceleration=_req(lim_spec, "acceleration", "robot.limits"),
            jerk=_req(lim_spec, "jerk", "robot.limits"))
    except ValueError as e:
        raise ValidationError(f"robot.limits: {e}") from None
    ee = node.get("end_effector", {})
    return RobotModel(
        joints=tuple(joints), links=tuple(links), limits=limits,
        ee_origin=_transform(ee.get("origin"), "robot.end_effector"),
        ee_velocity_limit=np.asarray(lim_spec.get("ee_velocity",
                                                  [np.inf] * 3), dtype=float),
        ee_position_limits=np.asarray(lim_spec.get("ee_position",
                                                   [[-np.inf, np.inf]] * 3),
                                      dtype=float))


def _controller(node: dict) -> dict:
    c = {
        "N": int(node.get("N", 16)),
        "Ts": float(node.get("Ts", 0.1)),
        "Q": node.get("Q", 1.0),
        "R": node.get("R", 10.0),
        "d_lb": float(node.get("d_lb", DEFAULT_D_LB)),
        "d_min": float(node.get("d_min", DEFAULT_D_MIN)),
        "gamma0": float(node.get("gamma0", 0.5)),
        "future_steps": [int(s) for s in node.get("future_steps", [])],
        "arms": {k: dict(v) for k, v in node.get("arms", {}).items()},
    }
    if not c["future_steps"]:
        c["future_steps"] = [max(1, c["N"] // 2)]
    if c["N"] < 1:
        raise ValidationError("controller.N: horizon must be >= 1")
    if c["Ts"] <= 0:
        raise ValidationError("controller.Ts: sample time must be positive")
    if any(not 1 <= s <= c["N"] for s in c["future_steps"]):
        raise ValidationError("controller.future_steps: every step must lie in [1, N]")
    for arm, cfg in c["arms"].items():
        if arm not in ("base", "new"):
            raise ValidationError(f"controller.arms: unknown arm {arm!r}")
        eps = cfg.get("eps_ub", ARM_DEFAULTS[arm]["eps_ub"])
        if not c["d_lb"] >= eps >= 0:
            raise ValidationError(
                f"controller.arms.{arm}: need d_lb >= eps_ub >= 0 "
                f"(d_lb={c['d_lb']}, eps_ub={eps})")
    return c


def scenario_from_dict(data: dict, name: str = "scenario") -> Scenario:
    if not isinstance(data, dict):
        raise ValidationError("scenario: top level must be an object")
    robot = _robot(_req(data, "robot", "scenario"))
    obstacles = [_hull(os_, f"obstacles[{i}]")
                 for i, os_ in enumerate(data.get("obstacles", []))]
    initial_q = np.asarray(data.get("initial_q", [0.0, 0.0, 0.0]), dtype=float)
    if initial_q.shape != (3,) or not np.all(np.isfinite(initial_q)):
        raise ValidationError("initial_q: must be a finite 3-vector")
    episode_length = float(data.get("episode_length", 10.0))
    if episode_length <= 0:
        raise ValidationError("episode_length: must be positive")
    controller = _controller(data.get("controller", {}))
    script = None
    if data.get("script") is not None:
        script = []
        for i, ss in enumerate(data["script"]):
            step = ScriptStep(float(_req(ss, "start", f"script[{i}]")),
                              float(_req(ss, "duration", f"script[{i}]")),
                              _req(ss, "xdot", f"script[{i}]"))
            if step.start < 0 or step.duration <= 0:
                raise ValidationError(f"script[{i}]: start >= 0 and duration > 0 required")
            if step.start + step.duration > episode_length + 1e-9:
                raise ValidationError(f"script[{i}]: extends past episode_length")
            script.append(step)
        script.sort(key=lambda s: s.start)
        for a, b in zip(script, script[1:]):
            if a.start + a.duration > b.start + 1e-9:
                raise ValidationError("script: steps must not overlap")
    sc = data.get("script_config", {})
    script_config = {
        "count": int(sc.get("count", 4)),
        "magnitude": [float(v) for v in sc.get("magnitude", [0.05, 0.3])],
        "axes": [int(a) for a in sc.get("axes", [0, 1, 2])],
    }
    if script_config["count"] < 1:
        raise ValidationError("script_config.count: must be >= 1")
    if not all(0 <= a <= 2 for a in script_config["axes"]) or not script_config["axes"]:
        raise ValidationError("script_config.axes: must be a non-empty subset of {0,1,2}")
    lo, hi = script_config["magnitude"]
    if not 0 <= lo <= hi:
        raise ValidationError("script_config.magnitude: need 0 <= lo <= hi")
    return Scenario(name=str(data.get("name", name)), robot=robot,
                    obstacles=obstacles, initial_q=initial_q,
                    episode_length=episode_length,
                    seed=int(data.get("seed", 0)), script=script,
                    script_config=script_config, controller=controller)


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ParseError(f"{path}: {e}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None
    return scenario_from_dict(data, name=path.stem)


def generate_step_inputs(seed: int, count: int = 4,
                         magnitude_range=(0.05, 0.3),
                         axes=(0, 1, 2),
                         episode_length: float = 10.0) -> list[ScriptStep]:
    """Consecutive step inputs with seeded random axis, sign and magnitude."""
    if count < 1:
        raise ValidationError("count must be >= 1")
    rng = np.random.default_rng(seed)
    duration = episode_length / count
    script = []
    for i in range(count):
        axis = int(rng.choice(list(axes)))
        sign = 1.0 if rng.uniform() < 0.5 else -1.0
        mag = float(rng.uniform(*magnitude_range))
        xdot = np.zeros(3)
        xdot[axis] = sign * mag
        script.append(ScriptStep(i * duration, duration, xdot))
    return script
