import { describe, expect, it } from "vitest";
import { clampToLimits, encodeCommand, parseMessage } from "../src/protocol";

const SNAPSHOT = JSON.stringify({
  type: "snapshot",
  tick: 3,
  t: 0.3,
  q: [0, 0, 0.1],
  xe: [0.1, 0, 0],
  u: [0, 0, 0.2],
  tracks: [{ link: 2, p_robot: [0, 0, 0.2], p_obst: [0, 0, 0], d: 0.2,
             p_robot_future: [0.1, 0, 0.2], d_future: 0.19 }],
  slack: 0,
  status: "optimal",
  collision: false,
  seq: 5,
  poses: { plate0: { R: [[1, 0, 0], [0, 1, 0], [0, 0, 1]], t: [0, 0, 0.2] } },
});

describe("parseMessage", () => {
  it("round-trips a snapshot frame", () => {
    const msg = parseMessage(SNAPSHOT);
    expect(msg?.type).toBe("snapshot");
    if (msg?.type === "snapshot") {
      expect(msg.tick).toBe(3);
      expect(msg.tracks[0].d).toBeCloseTo(0.2);
      expect(msg.poses.plate0.t).toEqual([0, 0, 0.2]);
    }
  });

  it("parses scene and ack frames", () => {
    const scene = parseMessage(JSON.stringify({
      type: "scene", Ts: 0.1, controller: "new",
      robot: { links: [] }, obstacles: [], limits: { ee_velocity: [1, 1, 1] },
    }));
    expect(scene?.type).toBe("scene");
    const ack = parseMessage(JSON.stringify({
      type: "ack", accepted: true, seq: 2, clamped: false, reason: "",
    }));
    expect(ack?.type).toBe("ack");
  });

  it("rejects malformed frames instead of throwing", () => {
    expect(parseMessage("not json")).toBeNull();
    expect(parseMessage("42")).toBeNull();
    expect(parseMessage(JSON.stringify({ type: "snapshot", tick: "x" }))).toBeNull();
    expect(parseMessage(JSON.stringify({ type: "mystery" }))).toBeNull();
  });
});

describe("encodeCommand", () => {
  it("produces the bridge's command frame", () => {
    const frame = JSON.parse(encodeCommand(7, [0.1, -0.2, 0]));
    expect(frame).toEqual({ type: "command", seq: 7, vx: 0.1, vy: -0.2, vz: 0 });
  });
});

describe("clampToLimits", () => {
  it("clamps componentwise", () => {
    expect(clampToLimits([2, -3, 0.1], [0.5, 0.5, 0.5])).toEqual([0.5, -0.5, 0.1]);
  });
});
