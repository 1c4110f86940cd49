// Application wiring: session setup, websocket stream, joystick, rendering.

import { CommandEmitter, attachStick } from "./joystick";
import { Hud } from "./hud";
import { BridgeLink } from "./net";
import { SnapshotBuffer, overlaySegments } from "./poseState";
import { encodeCommand, parseMessage, SceneMessage } from "./protocol";
import { SceneView } from "./scene";

const $ = (id: string) => document.getElementById(id)!;

async function listScenarios(): Promise<string[]> {
  const res = await fetch("/scenarios");
  return (await res.json()).scenarios;
}

async function createSession(name: string, controller: string): Promise<string> {
  const res = await fetch("/session", {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify({ scenario_name: name, controller }),
  });
  if (!res.ok) throw new Error(`session: ${res.status} ${await res.text()}`);
  return (await res.json()).session_id;
}

async function start(): Promise<void> {
  const canvas = $("view") as HTMLCanvasElement;
  const view = new SceneView(canvas);
  const hud = new Hud($("banner"), $("readout"));
  const buffer = new SnapshotBuffer();
  let sceneMsg: SceneMessage | null = null;
  let link: BridgeLink | null = null;

  const picker = $("scenario") as HTMLSelectElement;
  for (const name of await listScenarios()) {
    const opt = document.createElement("option");
    opt.value = opt.textContent = name;
    picker.appendChild(opt);
  }

  const emitter = new CommandEmitter((v) => {
    if (link !== null) link.send(encodeCommand(link.nextSeq(), v));
  });
  attachStick($("pad"), $("knob"), emitter);

  $("connect").addEventListener("click", async () => {
    link?.close();
    const controller = ($("controller") as HTMLSelectElement).value;
    const sid = await createSession(picker.value, controller);
    const proto = location.protocol === "https:" ? "wss:" : "ws:";
    link = new BridgeLink({
      url: `${proto}//${location.host}/ws/${sid}`,
      onStatus: (up) => hud.setConnection(up),
      onMessage: (raw) => {
        const msg = parseMessage(raw);
        if (msg === null) {
          console.warn("malformed frame skipped");
          return;
        }
        if (msg.type === "scene") {
          sceneMsg = msg;
          view.loadScene(msg);
          emitter.setLimits(msg.limits.ee_velocity);
          emitter.start();
        } else if (msg.type === "snapshot") {
          buffer.push(msg, performance.now());
          hud.update(msg);
          view.drawOverlays(overlaySegments(msg));
        }
      },
    });
  });

  const resize = () => view.resize(canvas.clientWidth, canvas.clientHeight);
  window.addEventListener("resize", resize);
  resize();

  const frame = () => {
    if (sceneMsg !== null) {
      view.applyPoses(buffer.posesAt(performance.now(), sceneMsg.Ts * 1000));
    }
    view.render();
    requestAnimationFrame(frame);
  };
  requestAnimationFrame(frame);
}

start().catch((e) => {
  $("banner").textContent = `startup failed: ${e}`;
  $("banner").className = "banner error";
});
