// Wire types for the teleop bridge (WebSocket JSON frames + HTTP).

export type Vec3 = [number, number, number];

export interface HullData {
  id: string;
  vertices: Vec3[];
}

export interface SceneMessage {
  type: "scene";
  Ts: number;
  controller: string;
  robot: { links: { id: string; hulls: HullData[] }[] };
  obstacles: HullData[];
  limits: { ee_velocity: Vec3 };
}

export interface TrackData {
  link: number;
  p_robot: Vec3 | null;
  p_obst: Vec3 | null;
  d: number | null;
  p_robot_future: Vec3 | null;
  d_future: number | null;
}

export interface Pose {
  R: [Vec3, Vec3, Vec3];
  t: Vec3;
}

export interface SnapshotMessage {
  type: "snapshot";
  tick: number;
  t: number;
  q: Vec3;
  xe: Vec3;
  u: Vec3;
  tracks: TrackData[];
  slack: number;
  status: string;
  collision: boolean;
  seq: number;
  poses: Record<string, Pose>;
  overrun?: boolean;
}

export interface AckMessage {
  type: "ack";
  accepted: boolean;
  seq: number;
  clamped: boolean;
  reason: string;
}

export type BridgeMessage = SceneMessage | SnapshotMessage | AckMessage;

export interface CommandFrame {
  type: "command";
  seq: number;
  vx: number;
  vy: number;
  vz: number;
}

function isVec3(v: unknown): v is Vec3 {
  return Array.isArray(v) && v.length === 3 && v.every((x) => typeof x === "number");
}

/** Parse one frame; returns null for malformed input (caller logs and skips). */
export function parseMessage(raw: string): BridgeMessage | null {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null) return null;
  const msg = data as Record<string, unknown>;
  switch (msg.type) {
    case "scene":
      if (typeof msg.Ts !== "number" || typeof msg.robot !== "object") return null;
      return msg as unknown as SceneMessage;
    case "snapshot":
      if (typeof msg.tick !== "number" || !isVec3(msg.q) || !isVec3(msg.u)) return null;
      if (!Array.isArray(msg.tracks) || typeof msg.poses !== "object") return null;
      return msg as unknown as SnapshotMessage;
    case "ack":
      if (typeof msg.seq !== "number") return null;
      return msg as unknown as AckMessage;
    default:
      return null;
  }
}

export function encodeCommand(seq: number, v: Vec3): string {
  const frame: CommandFrame = { type: "command", seq, vx: v[0], vy: v[1], vz: v[2] };
  return JSON.stringify(frame);
}

/** Componentwise clamp to the limits advertised in the scene message. */
export function clampToLimits(v: Vec3, limits: Vec3): Vec3 {
  return [
    Math.max(-limits[0], Math.min(limits[0], v[0])),
    Math.max(-limits[1], Math.min(limits[1], v[1])),
    Math.max(-limits[2], Math.min(limits[2], v[2])),
  ];
}
