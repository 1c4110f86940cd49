import { describe, expect, it } from "vitest";
import { SnapshotBuffer, overlaySegments } from "../src/poseState";
import { SnapshotMessage } from "../src/protocol";

function snap(tick: number, x: number, tracks: SnapshotMessage["tracks"] = []):
    SnapshotMessage {
  return {
    type: "snapshot", tick, t: tick * 0.1,
    q: [0, 0, 0], xe: [0, 0, 0], u: [0, 0, 0],
    tracks, slack: 0, status: "optimal", collision: false, seq: tick,
    poses: { h0: { R: [[1, 0, 0], [0, 1, 0], [0, 0, 1]], t: [x, 0, 0] } },
  };
}

describe("SnapshotBuffer", () => {
  it("uses the latest pose verbatim when no history exists", () => {
    const buf = new SnapshotBuffer();
    buf.push(snap(1, 2.0), 0);
    const poses = buf.posesAt(50, 100);
    expect(poses.get("h0")!.position.x).toBeCloseTo(2.0);
  });

  it("interpolates positions between the last two snapshots", () => {
    const buf = new SnapshotBuffer();
    buf.push(snap(1, 0.0), 0);
    buf.push(snap(2, 1.0), 100);
    expect(buf.posesAt(100, 100).get("h0")!.position.x).toBeCloseTo(0.0);
    expect(buf.posesAt(150, 100).get("h0")!.position.x).toBeCloseTo(0.5);
    expect(buf.posesAt(200, 100).get("h0")!.position.x).toBeCloseTo(1.0);
    expect(buf.posesAt(999, 100).get("h0")!.position.x).toBeCloseTo(1.0);
  });

  it("latest raw snapshot is kept as-is for overlays", () => {
    const buf = new SnapshotBuffer();
    const s = snap(4, 3.0);
    buf.push(snap(3, 0.0), 0);
    buf.push(s, 100);
    expect(buf.latest).toBe(s);
  });
});

describe("overlaySegments", () => {
  it("builds current and future segments with distinct kinds", () => {
    const s = snap(1, 0, [{
      link: 2, p_robot: [0, 0, 1], p_obst: [0, 0, 0], d: 1.0,
      p_robot_future: [0.5, 0, 1], d_future: 0.9,
    }]);
    const segs = overlaySegments(s);
    expect(segs.map((x) => x.kind)).toEqual(["current", "future"]);
    expect(segs[0].distance).toBeCloseTo(1.0);
    expect(segs[1].from.x).toBeCloseTo(0.5);
  });

  it("skips degraded tracks with missing data", () => {
    const s = snap(1, 0, [{
      link: 0, p_robot: null, p_obst: null, d: null,
      p_robot_future: null, d_future: null,
    }]);
    expect(overlaySegments(s)).toEqual([]);
  });
});
