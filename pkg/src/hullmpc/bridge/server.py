"""WebSocket/HTTP bridge running sessions at their sample rate.

Network handlers talk to the control timeline only through the command
mailbox (latest sequence wins) and per-client broadcast queues, so a slow
client can never delay a tick. Late ticks are completed and counted, never
skipped.
"""
from __future__ import annotations

import argparse
import asyncio
import itertools
import json
import os
import time

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect

from ..errors import HullMpcError, SessionClosed
from ..simlab.bundled import bundled_names, bundled_path
from ..simlab.scenario import load_scenario
from .session import SessionCore

CLIENT_QUEUE_SIZE = 32


class LiveSession:
    def __init__(self, core: SessionCore):
        self.core = core
        self.clients: set[asyncio.Queue] = set()
        self.task: asyncio.Task | None = None

    def broadcast(self, message: dict):
        text = json.dumps(message)
        for q in self.clients:
            if q.full():  # drop the oldest frame rather than stall the loop
                try:
                    q.get_nowait()
                except asyncio.QueueEmpty:
                    pass
            q.put_nowait(text)

    async def run(self):
        Ts = self.core.cfg.Ts
        start = time.monotonic()
        while not self.core.closed:
            deadline = start + (self.core.tick_index + 1) * Ts
            snapshot = self.core.tick()
            now = time.monotonic()
            if now > deadline:
                self.core.overruns += 1
                snapshot["overrun"] = True
            self.broadcast(snapshot)
            await asyncio.sleep(max(0.0, deadline - time.monotonic()))


def create_app() -> FastAPI:
    app = FastAPI(title="hullmpc teleop bridge")
    sessions: dict[str, LiveSession] = {}
    counter = itertools.count(1)

    @app.get("/health")
    async def health():
        return {"status": "ok", "sessions": len(sessions)}

    @app.get("/scenarios")
    async def scenarios():
        return {"scenarios": bundled_names()}

    @app.post("/session")
    async def create_session(body: dict):
        name = body.get("scenario_name")
        controller = body.get("controller", "new")
        if controller not in ("base", "new"):
            raise HTTPException(422, f"controller must be 'base' or 'new', got {controller!r}")
        if name not in bundled_names():
            raise HTTPException(404, f"unknown scenario {name!r}")
        try:
            core = SessionCore(load_scenario(bundled_path(name)), controller)
        except HullMpcError as e:
            raise HTTPException(422, str(e)) from None
        sid = f"s{next(counter)}"
        sessions[sid] = LiveSession(core)
        return {"session_id": sid, "Ts": core.cfg.Ts}

    @app.delete("/session/{sid}")
    async def close_session(sid: str):
        live = sessions.pop(sid, None)
        if live is None:
            raise HTTPException(404, f"no session {sid!r}")
        live.core.close()
        if live.task is not None:
            live.task.cancel()
        return {"closed": sid}

    @app.websocket("/ws/{sid}")
    async def ws_endpoint(ws: WebSocket, sid: str):
        live = sessions.get(sid)
        if live is None:
            await ws.close(code=4404)
            return
        await ws.accept()
        await ws.send_text(json.dumps(live.core.scene_message()))
        if live.task is None:
            live.task = asyncio.create_task(live.run())
        queue: asyncio.Queue = asyncio.Queue(maxsize=CLIENT_QUEUE_SIZE)
        live.clients.add(queue)

        async def pump_out():
            while True:
                await ws.send_text(await queue.get())

        out_task = asyncio.create_task(pump_out())
        try:
            while True:
                raw = await ws.receive_text()
                try:
                    msg = json.loads(raw)
                except json.JSONDecodeError:
                    continue
                if msg.get("type") == "command":
                    try:
                        ack = live.core.submit_command(
                            [msg.get("vx", 0.0), msg.get("vy", 0.0),
                             msg.get("vz", 0.0)],
                            int(msg.get("seq", -1)))
                    except SessionClosed:
                        break
                    await ws.send_text(json.dumps(ack.as_dict()))
        except WebSocketDisconnect:
            pass
        finally:
            out_task.cancel()
            live.clients.discard(queue)

    return app


app = create_app()


def main(argv=None) -> int:
    import uvicorn

    ap = argparse.ArgumentParser(prog="hullmpc-serve",
                                 description="teleop bridge server")
    ap.add_argument("--host", default=os.environ.get("HULLMPC_HOST", "127.0.0.1"))
    ap.add_argument("--port", type=int,
                    default=int(os.environ.get("HULLMPC_PORT", "8720")))
    args = ap.parse_args(argv)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
