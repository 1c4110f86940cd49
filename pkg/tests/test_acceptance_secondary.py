"""Secondary acceptance: the teleop loop (criterion 11, bridge side).

The browser client's own checks (cadence, clamping, reconnect behavior) live
in frontend/test; everything here runs without the UI built.
"""
import json
import threading
import time

import numpy as np

from hullmpc.bridge.server import create_app
from hullmpc.bridge.session import SessionCore
from hullmpc.geometry import distance, transform_hull
from hullmpc.kinematics import posed_link_hulls
from hullmpc.simlab.bundled import bundled_path
from hullmpc.simlab.scenario import load_scenario


def report(ok: bool, detail: str):
    print(f"ACCEPTANCE 11 {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def scripted_commands():
    """Aggressive swing sequence on the regression scene's commanded axis."""
    out = {}
    for k in range(0, 30):
        out[k] = (k + 1, [0.0, 1.4, 0.0])
    for k in range(30, 70):
        out[k] = (k + 1, [0.0, -1.4, 0.0])
    for k in range(70, 110):
        out[k] = (k + 1, [0.0, 1.2, 0.0])
    return out


def test_criterion_11_teleop_loop():
    # -- replayability: identical command log => identical snapshot stream ----
    scenario = load_scenario(bundled_path("parallel_surfaces"))
    script = scripted_commands()

    def run_session():
        core = SessionCore(scenario, "new")
        stream = []
        for k in range(120):
            if k in script:
                seq, vec = script[k]
                core.submit_command(vec, seq)
            stream.append(json.dumps(core.tick(), sort_keys=True))
        return core, stream

    core_a, stream_a = run_session()
    _, stream_b = run_session()
    replay_ok = stream_a == stream_b

    # -- safety parity: the control_step distance guarantee holds per tick ----
    cfg = scenario.mpc_config("new")
    floor = cfg.d_lb - cfg.eps_ub
    obstacles = [transform_hull(h, H) for h, H in scenario.obstacles]
    core_c = SessionCore(scenario, "new")
    min_d = np.inf
    for k in range(120):
        if k in script:
            seq, vec = script[k]
            core_c.submit_command(vec, seq)
        snap = core_c.tick()
        d = min(distance(h, o).distance or 0.0
                for lh in posed_link_hulls(scenario.robot, snap["q"])
                for h in lh for o in obstacles)
        min_d = min(min_d, d)
    safety_ok = min_d >= floor - 1e-9

    # -- stick release: the zero command governs within 2 ticks ---------------
    core_d = SessionCore(scenario, "new")
    core_d.submit_command([0.0, 1.0, 0.0], seq=1)
    for _ in range(8):
        last = core_d.tick()
    speed_before = abs(last["u"][1])
    core_d.submit_command([0.0, 0.0, 0.0], seq=2)  # the release frame
    release_ok = bool(np.allclose(core_d._held_command(), 0.0))
    snaps = [core_d.tick(), core_d.tick()]
    # with a zero target the commanded joint rate must already be dropping
    release_ok = release_ok and abs(snaps[-1]["u"][1]) < speed_before

    # -- round-trip latency over a live server --------------------------------
    import uvicorn
    from websockets.sync.client import connect as ws_connect
    import httpx

    app = create_app()
    config = uvicorn.Config(app, host="127.0.0.1", port=8733, log_level="error")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.time() + 10
    while not server.started and time.time() < deadline:
        time.sleep(0.05)
    assert server.started, "bridge server failed to start"
    try:
        with httpx.Client(base_url="http://127.0.0.1:8733", timeout=5.0) as http:
            assert http.get("/health").json()["status"] == "ok"
            sid = http.post("/session", json={
                "scenario_name": "rotating_plate", "controller": "new",
            }).json()["session_id"]
        latencies = []
        with ws_connect(f"ws://127.0.0.1:8733/ws/{sid}") as ws:
            scene = json.loads(ws.recv())
            assert scene["type"] == "scene"
            for i in range(1, 9):
                t0 = time.monotonic()
                ws.send(json.dumps({"type": "command", "seq": i,
                                    "vx": 0.0, "vy": 0.05, "vz": 0.0}))
                while True:
                    msg = json.loads(ws.recv(timeout=5))
                    if msg.get("type") == "snapshot" and msg.get("seq", -1) >= i:
                        latencies.append(time.monotonic() - t0)
                        break
        median_ms = 1e3 * float(np.median(latencies))
        latency_ok = median_ms < 200.0
    finally:
        server.should_exit = True
        thread.join(timeout=5)

    report(replay_ok and safety_ok and release_ok and latency_ok,
           f"replay identical={replay_ok}, per-tick min dist {min_d:.4f} >= "
           f"{floor:.4f}={safety_ok}, release zero held={release_ok}, "
           f"round-trip median {median_ms:.0f} ms (< 200)")
