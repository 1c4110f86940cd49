// Snapshot buffering and pose interpolation.
//
// Poses are interpolated between the two most recent snapshots for smooth
// rendering, but overlays (witness points, distances, status) always come
// from the latest raw snapshot: safety data is never interpolated.

import * as THREE from "three";
import { Pose, SnapshotMessage } from "./protocol";

export interface RenderPose {
  quaternion: THREE.Quaternion;
  position: THREE.Vector3;
}

function poseToRender(p: Pose): RenderPose {
  const m = new THREE.Matrix4();
  const [r0, r1, r2] = p.R;
  m.set(r0[0], r0[1], r0[2], p.t[0],
        r1[0], r1[1], r1[2], p.t[1],
        r2[0], r2[1], r2[2], p.t[2],
        0, 0, 0, 1);
  const quaternion = new THREE.Quaternion().setFromRotationMatrix(m);
  const position = new THREE.Vector3(p.t[0], p.t[1], p.t[2]);
  return { quaternion, position };
}

export class SnapshotBuffer {
  private prev: SnapshotMessage | null = null;
  latest: SnapshotMessage | null = null;
  private prevPoses = new Map<string, RenderPose>();
  private latestPoses = new Map<string, RenderPose>();
  private receivedAt = 0;

  push(snap: SnapshotMessage, nowMs: number): void {
    this.prev = this.latest;
    this.prevPoses = this.latestPoses;
    this.latest = snap;
    this.latestPoses = new Map(
      Object.entries(snap.poses).map(([id, p]) => [id, poseToRender(p)]),
    );
    this.receivedAt = nowMs;
  }

  /**
   * Interpolated pose per hull at the render instant. alpha in [0, 1] blends
   * prev -> latest; clamps to the latest pose when no history exists.
   */
  posesAt(nowMs: number, periodMs: number): Map<string, RenderPose> {
    if (this.latest === null) return new Map();
    if (this.prev === null || periodMs <= 0) return this.latestPoses;
    const alpha = Math.min(1, Math.max(0, (nowMs - this.receivedAt) / periodMs));
    const out = new Map<string, RenderPose>();
    for (const [id, target] of this.latestPoses) {
      const from = this.prevPoses.get(id);
      if (from === undefined) {
        out.set(id, target);
        continue;
      }
      out.set(id, {
        quaternion: from.quaternion.clone().slerp(target.quaternion, alpha),
        position: from.position.clone().lerp(target.position, alpha),
      });
    }
    return out;
  }
}

export interface OverlaySegment {
  from: THREE.Vector3;
  to: THREE.Vector3;
  kind: "current" | "future";
  link: number;
  distance: number;
}

/** Closest-point line segments straight from the latest raw snapshot. */
export function overlaySegments(snap: SnapshotMessage): OverlaySegment[] {
  const out: OverlaySegment[] = [];
  for (const t of snap.tracks) {
    if (t.p_robot !== null && t.p_obst !== null && t.d !== null) {
      out.push({
        from: new THREE.Vector3(...t.p_robot),
        to: new THREE.Vector3(...t.p_obst),
        kind: "current",
        link: t.link,
        distance: t.d,
      });
    }
    if (t.p_robot_future !== null && t.p_obst !== null && t.d_future !== null) {
      out.push({
        from: new THREE.Vector3(...t.p_robot_future),
        to: new THREE.Vector3(...t.p_obst),
        kind: "future",
        link: t.link,
        distance: t.d_future,
      });
    }
  }
  return out;
}
