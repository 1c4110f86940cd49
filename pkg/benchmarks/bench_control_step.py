"""Wall-clock of one control cycle on the 13-hull reference scene.

Usage: python benchmarks/bench_control_step.py [--cycles 100]
"""
import argparse
import time

import numpy as np

from hullmpc.controller import Controller
from hullmpc.geometry import BACKEND_NAME
from hullmpc.kinematics import state_from_q
from hullmpc.simlab import load_scenario
from hullmpc.simlab.bundled import bundled_path


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--cycles", type=int, default=100)
    ap.add_argument("--controller", choices=("base", "new"), default="new")
    args = ap.parse_args()

    scenario = load_scenario(bundled_path("table"))
    ctrl = Controller(scenario.robot, scenario.mpc_config(args.controller),
                      scenario.obstacles)
    x = state_from_q(scenario.robot, scenario.initial_q)
    xd = np.array([0.0, -0.1, 0.05])

    times = []
    for _ in range(args.cycles):
        t0 = time.perf_counter()
        out = ctrl.control_step(x, xd)
        times.append(time.perf_counter() - t0)
        x = state_from_q(scenario.robot, x.q + ctrl.cfg.Ts * out.u_applied)
    times_ms = 1e3 * np.asarray(times)
    print(f"backend={BACKEND_NAME} hulls={scenario.robot.hull_count} "
          f"N={ctrl.cfg.N} cycles={args.cycles}")
    print(f"control_step: mean {times_ms.mean():.1f} ms, "
          f"p50 {np.percentile(times_ms, 50):.1f} ms, "
          f"p95 {np.percentile(times_ms, 95):.1f} ms, "
          f"max {times_ms.max():.1f} ms")


if __name__ == "__main__":
    main()
