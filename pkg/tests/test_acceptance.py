"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
"""
import time

import numpy as np
import pytest

from hullmpc.errors import MaxShrinkIterations
from hullmpc.geometry import (ConvexHull, HomTransform, distance,
                              shrink_closest_point, transform_hull)
from hullmpc.kinematics import (forward_kinematics, jacobian_end_effector,
                                jacobian_point, joint_transforms)
from hullmpc.models import reference_carm
from hullmpc.prediction import smooth_point
from hullmpc.qp import QpProblem, solve_qp
from hullmpc.simlab import (aggregate_profile, compare, load_scenario,
                            run_batch, run_episode)
from hullmpc.simlab.bundled import bundled_path
from hullmpc.simlab.logio import write_episode_csv

from oracles import (hull_pair_distance_fw, point_to_hull_residual, qp_solve_pg,
                     random_feasible_qp, random_hull)

D_MIN = 2.5e-2


def report(criterion: int, ok: bool, detail: str):
    print(f"ACCEPTANCE {criterion:2d} {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, f"criterion {criterion}: {detail}"


# --------------------------------------------------------------------------
@pytest.fixture(scope="module")
def parallel_batches():
    scenario = load_scenario(bundled_path("parallel_surfaces"))
    return {arm: run_batch(scenario, arm, episodes=20, seed=100,
                           collect_profile=False)
            for arm in ("new", "base")}, scenario


def test_criterion_1_gjk_oracle_equivalence():
    t0 = time.time()
    rng = np.random.default_rng(1001)
    checked = 0
    worst = 0.0
    while checked < 500:
        A, B = random_hull(rng), random_hull(rng)
        res = distance(ConvexHull("a", A), ConvexHull("b", B))
        if res.collision:
            d_or, _, _ = hull_pair_distance_fw(A, B)
            assert d_or <= 2e-6
            continue
        d_or, _, _ = hull_pair_distance_fw(A, B)
        err = abs(res.distance - d_or)
        assert err <= 1e-6 * (1 + d_or), (checked, err)
        worst = max(worst, err / (1 + d_or))
        # witness-pair gradient identity
        assert abs(np.linalg.norm(res.gradient) - res.distance) <= 1e-9
        checked += 1
    dt = time.time() - t0
    report(1, dt < 30.0,
           f"500 pairs, worst rel err {worst:.2e}, gradient identity held, {dt:.1f} s")


def test_criterion_2_jacobian_correctness():
    t0 = time.time()
    model = reference_carm()
    rng = np.random.default_rng(1002)
    h = 1e-6
    worst = 0.0
    checked = 0
    while checked < 100:
        q = rng.uniform(-1.0, 1.0, 3)
        try:
            J = jacobian_end_effector(model, q)
        except Exception:
            continue
        J_fd = np.column_stack([
            (forward_kinematics(model, q + h * e)[1]
             - forward_kinematics(model, q - h * e)[1]) / (2 * h)
            for e in np.eye(3)])
        rel = np.linalg.norm(J - J_fd) / max(1.0, np.linalg.norm(J))
        assert rel <= 1e-5
        worst = max(worst, rel)

        r = rng.uniform(-0.6, 0.6, 3)
        link = int(rng.integers(0, 3))
        Jp = jacobian_point(model, q, r, link)
        joint = model.links[link].joint

        def pos(qq):
            return joint_transforms(model, qq)[joint].apply(r)

        Jp_fd = np.column_stack([(pos(q + h * e) - pos(q - h * e)) / (2 * h)
                                 for e in np.eye(3)])
        relp = np.linalg.norm(Jp - Jp_fd) / max(1.0, np.linalg.norm(Jp))
        assert relp <= 1e-5
        worst = max(worst, relp)
        checked += 1
    dt = time.time() - t0
    report(2, dt < 5.0, f"100 configs, worst rel err {worst:.2e}, {dt:.1f} s")


def test_criterion_3_smoothing_branch_exactness():
    t0 = time.time()
    rng = np.random.default_rng(1003)
    for _ in range(1000):
        r_f = rng.uniform(-0.08, 0.08, 3)
        r_c = rng.uniform(-0.08, 0.08, 3)
        r_cp = rng.uniform(-0.08, 0.08, 3)
        r_fp = rng.uniform(-0.08, 0.08, 3)
        out = smooth_point(r_f, r_c, r_cp, r_fp, D_MIN)
        assert any(np.array_equal(out, c) for c in (r_f, r_fp, r_cp))
        if np.linalg.norm(r_f - r_c) >= D_MIN:
            assert np.array_equal(out, r_f)
        elif np.linalg.norm(r_f - r_fp) > np.linalg.norm(r_c - r_cp):
            assert np.array_equal(out, r_fp)
        else:
            assert np.array_equal(out, r_cp)
    dt = time.time() - t0
    report(3, dt < 1.0, f"1000 states, branches exact, {dt:.2f} s")


def test_criterion_4_shrink_soundness():
    t0 = time.time()
    rng = np.random.default_rng(1004)
    done = 0
    worst = 0.0
    while done < 200:
        va = rng.uniform(-0.6, 0.6, (int(rng.integers(4, 12)), 3))
        vb = rng.uniform(-0.6, 0.6, (int(rng.integers(4, 12)), 3))
        P, ca = ConvexHull("a", va).recentred()
        O, cb = ConvexHull("b", vb).recentred()
        H_p = HomTransform.from_translation(ca)
        H_o = HomTransform.from_translation(cb + rng.uniform(-0.25, 0.25, 3))
        sep = np.linalg.norm(H_p.translation - H_o.translation)
        if sep <= 1e-3:
            continue
        if not distance(transform_hull(P, H_p), transform_hull(O, H_o)).collision:
            continue
        try:
            r_local, collided = shrink_closest_point(None, P, O, H_p, H_o, 0.5)
        except MaxShrinkIterations:
            assert False, f"shrink failed at separation {sep:.4f}"
        assert not collided
        res = point_to_hull_residual(H_p.apply(r_local), H_p.apply(P.vertices))
        assert res <= 1e-7
        worst = max(worst, res)
        done += 1
    dt = time.time() - t0
    report(4, dt < 30.0,
           f"200 colliding pairs, worst membership residual {worst:.2e}, {dt:.1f} s")


def test_criterion_5_future_point_prediction_advantage():
    t0 = time.time()
    scenario = load_scenario(bundled_path("rotating_plate"))
    errs = {}
    for arm in ("new", "base"):
        results = run_batch(scenario, arm, episodes=20, seed=300,
                            collect_profile=True)
        prof = aggregate_profile(results)
        errs[arm] = float(prof.mean_err[8 - 1])  # horizon step N/2 = 8
    ratio = errs["base"] / errs["new"]
    dt = time.time() - t0
    report(5, ratio >= 2.0 and dt < 300.0,
           f"mean |err| at i=8: base {errs['base']:.5f} vs new {errs['new']:.5f} "
           f"({ratio:.1f}x, need >= 2x), {dt:.0f} s")


def test_criterion_6_collision_freedom(parallel_batches):
    t0 = time.time()
    batches, scenario = parallel_batches
    cfg_new = scenario.mpc_config("new")
    floor_new = cfg_new.d_lb - cfg_new.eps_ub
    new_collisions = sum(e.metrics.collisions for e in batches["new"])
    new_min = min(min(r[7] for r in e.rows) for e in batches["new"])
    cfg_base = scenario.mpc_config("base")
    floor_base = cfg_base.d_lb - cfg_base.eps_ub
    base_failures = sum(
        e.metrics.collisions > 0 or any(r[7] < floor_base - 1e-9 for r in e.rows)
        for e in batches["base"])
    ok = (new_collisions == 0 and new_min >= floor_new - 1e-9
          and base_failures >= 1)
    dt = time.time() - t0
    report(6, ok and dt < 600.0,
           f"new: 0 collisions, min dist {new_min:.4f} >= {floor_new:.4f}; "
           f"baseline failures in {base_failures}/20 episodes, {dt:.0f} s")


def test_criterion_7_smoothness_direction(parallel_batches):
    batches, _ = parallel_batches
    f_new = [e.metrics.f_vs for e in batches["new"]]
    f_base = [e.metrics.f_vs for e in batches["base"]]
    res = compare(f_new, f_base, metric="f_vs", direction="less")
    ok = float(np.mean(f_new)) < float(np.mean(f_base)) and res.significant
    report(7, ok,
           f"f_vs new {np.mean(f_new):.3f} < base {np.mean(f_base):.3f}, "
           f"Welch p = {res.p_value:.2e} (alpha 0.05)")


def test_criterion_8_qp_solver_against_oracle():
    t0 = time.time()
    rng = np.random.default_rng(1008)
    worst_obj = 0.0
    worst_feas = 0.0
    for _ in range(200):
        H, g, G, h = random_feasible_qp(rng, n_max=64, m_max=128)
        qp = QpProblem(H=H, g=g, G=G, h=h)
        z, status = solve_qp(qp)
        assert status == "optimal"
        feas = qp.violation(z)
        assert feas <= 1e-8
        _, obj_oracle = qp_solve_pg(H, g, G, h)
        diff = abs(qp.objective(z) - obj_oracle)
        assert diff <= 1e-6, diff
        worst_obj = max(worst_obj, diff)
        worst_feas = max(worst_feas, feas)
    dt = time.time() - t0
    report(8, dt < 60.0,
           f"200 QPs, worst |obj diff| {worst_obj:.2e}, "
           f"worst violation {worst_feas:.2e}, {dt:.1f} s")


def test_criterion_9_deterministic_logs(tmp_path):
    scenario = load_scenario(bundled_path("rotating_plate"))
    paths = []
    for run in range(2):
        result = run_episode(scenario, "new", collect_profile=False)
        paths.append(write_episode_csv(tmp_path / f"run{run}.csv", result))
    identical = paths[0].read_bytes() == paths[1].read_bytes()
    report(9, identical, "episode CSVs byte-identical across two runs "
                         "(t_c lives only in the metrics summary)")


def test_criterion_10_realtime_budget():
    scenario = load_scenario(bundled_path("table"))
    assert scenario.robot.hull_count == 13 and len(scenario.obstacles) == 1
    result = run_episode(scenario, "new", collect_profile=False)
    mean_ms = result.metrics.t_c
    report(10, mean_ms < 50.0,
           f"mean control_step {mean_ms:.1f} ms at N=16, 13 hulls + 1 obstacle "
           f"(budget 50 ms)")
