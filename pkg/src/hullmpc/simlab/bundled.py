"""Builders for the scenario files shipped with the package."""
from __future__ import annotations

import json
from pathlib import Path

from ..geometry import ConvexHull, HomTransform
from ..kinematics import RobotModel
from ..kinematics import euler_xyz_from_matrix
from ..models import plate_robot, plate_table_obstacle, reference_carm, table_obstacle

SCENARIO_DIR = Path(__file__).parent / "scenarios"


def _transform_dict(H: HomTransform) -> dict:
    return {"xyz": [float(v) for v in H.translation],
            "rpy": [float(v) for v in euler_xyz_from_matrix(H.rotation)]}


def _hull_dict(hull: ConvexHull, origin: HomTransform) -> dict:
    return {"id": hull.id,
            "vertices": [[float(c) for c in v] for v in hull.vertices],
            "origin": _transform_dict(origin)}


def robot_dict(model: RobotModel) -> dict:
    return {
        "joints": [{"axis": [float(a) for a in j.axis],
                    "origin": _transform_dict(j.origin)} for j in model.joints],
        "links": [{"name": link.name, "joint": link.joint,
                   "hulls": [_hull_dict(h, off) for h, off in link.hulls]}
                  for link in model.links],
        "end_effector": {"origin": _transform_dict(model.ee_origin)},
        "limits": {
            "position": model.limits.position.tolist(),
            "velocity": model.limits.velocity.tolist(),
            "acceleration": model.limits.acceleration.tolist(),
            "jerk": model.limits.jerk.tolist(),
            "ee_velocity": model.ee_velocity_limit.tolist(),
            "ee_position": model.ee_position_limits.tolist(),
        },
    }


def _controller_section(**overrides) -> dict:
    c = {
        "N": 16, "Ts": 0.1, "Q": 1.0, "R": 10.0,
        "d_lb": 0.12, "d_min": 2.5e-2, "gamma0": 0.5,
        "future_steps": [8],
        "arms": {
            "base": {"S": 1.1e5, "eps_ub": 1.2e-1, "use_future": False},
            "new": {"S": 1.8e5, "eps_ub": 5.2e-3, "use_future": True},
        },
    }
    c.update(overrides)
    return c


def freespace_scenario() -> dict:
    """C-arm with the table pushed far away: pure velocity tracking."""
    hull, pose = table_obstacle(center=(0.0, 0.0, -6.0))
    return {
        "name": "freespace",
        "seed": 0,
        "episode_length": 10.0,
        "initial_q": [0.0, 0.0, 0.0],
        "robot": robot_dict(reference_carm()),
        "obstacles": [_hull_dict(hull, pose)],
        "controller": _controller_section(),
        "script": [
            {"start": 0.0, "duration": 2.5, "xdot": [0.12, 0.0, 0.0]},
            {"start": 2.5, "duration": 2.5, "xdot": [0.0, -0.15, 0.0]},
            {"start": 5.0, "duration": 2.5, "xdot": [0.0, 0.0, 0.2]},
            {"start": 7.5, "duration": 2.5, "xdot": [-0.12, 0.1, 0.0]},
        ],
        "script_config": {"count": 4, "magnitude": [0.05, 0.2], "axes": [0, 1, 2]},
    }


def table_scenario() -> dict:
    """C-arm over the operating table; random 4-step scripts by default."""
    hull, pose = table_obstacle()
    return {
        "name": "table",
        "seed": 0,
        "episode_length": 12.0,
        "initial_q": [0.0, 0.0, 0.0],
        "robot": robot_dict(reference_carm()),
        "obstacles": [_hull_dict(hull, pose)],
        "controller": _controller_section(),
        "script": None,
        "script_config": {"count": 4, "magnitude": [0.08, 0.3], "axes": [0, 1, 2]},
    }


def rotating_plate_scenario() -> dict:
    """Thin plate over a table: closest points migrate edge-to-edge."""
    hull, pose = plate_table_obstacle()
    return {
        "name": "rotating_plate",
        "seed": 0,
        "episode_length": 12.0,
        "initial_q": [0.0, 0.0, 0.15],
        "robot": robot_dict(plate_robot(gap=0.25)),
        "obstacles": [_hull_dict(hull, pose)],
        "controller": _controller_section(),
        "script": None,
        "script_config": {"count": 4, "magnitude": [0.25, 0.5], "axes": [1]},
    }


def parallel_surfaces_scenario() -> dict:
    """Near-parallel regression scene: asymmetric plate over a stepped table.

    The short edge binds over the low table while the long edge swings fast
    over a raised block with less clearance, so a late closest-point switch
    leaves less stopping distance than the plate's braking needs.
    """
    from ..models import oriented_box

    table, table_pose = plate_table_obstacle()
    block, block_pose = oriented_box("block", (0.25, 0.6, 0.0225), (0.65, 0.0, 0.0225))
    robot = plate_robot(gap=0.2, plate_half=(0.405, 0.3, 0.012),
                        plate_offset=(0.295, 0.0, 0.0))
    return {
        "name": "parallel_surfaces",
        "seed": 0,
        "episode_length": 12.0,
        "initial_q": [0.0, 0.0, 0.0],
        "robot": robot_dict(robot),
        "obstacles": [_hull_dict(table, table_pose), _hull_dict(block, block_pose)],
        "controller": _controller_section(),
        "script": None,
        "script_config": {"count": 4, "magnitude": [1.0, 1.5], "axes": [1]},
    }


BUILDERS = {
    "freespace": freespace_scenario,
    "table": table_scenario,
    "rotating_plate": rotating_plate_scenario,
    "parallel_surfaces": parallel_surfaces_scenario,
}


def bundled_names() -> list[str]:
    return sorted(BUILDERS)


def bundled_path(name: str) -> Path:
    return SCENARIO_DIR / f"{name}.json"


def write_bundled(directory: Path | None = None) -> list[Path]:
    directory = Path(directory) if directory else SCENARIO_DIR
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, builder in BUILDERS.items():
        path = directory / f"{name}.json"
        path.write_text(json.dumps(builder(), indent=1) + "\n")
        written.append(path)
    return written


if __name__ == "__main__":
    for p in write_bundled():
        print(p)
