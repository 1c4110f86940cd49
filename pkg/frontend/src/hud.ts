// Status banner and numeric readouts; values always mirror the latest raw
// snapshot, never an interpolation.

import { SnapshotMessage } from "./protocol";

export class Hud {
  constructor(
    private readonly banner: HTMLElement,
    private readonly readout: HTMLElement,
  ) {}

  setConnection(connected: boolean): void {
    if (!connected) {
      this.banner.textContent = "DISCONNECTED - retrying";
      this.banner.className = "banner error";
    } else {
      this.banner.textContent = "connected";
      this.banner.className = "banner ok";
    }
  }

  update(snap: SnapshotMessage): void {
    if (snap.collision) {
      this.banner.textContent = "COLLISION";
      this.banner.className = "banner error";
    } else if (snap.status !== "optimal") {
      this.banner.textContent = `SOLVER ${snap.status.toUpperCase()} - safe stop`;
      this.banner.className = "banner warn";
    } else {
      this.banner.textContent = "connected";
      this.banner.className = "banner ok";
    }
    const dists = snap.tracks
      .filter((t) => t.d !== null)
      .map((t) => `link ${t.link}: d=${t.d!.toFixed(3)} m` +
        (t.d_future !== null ? ` / future ${t.d_future.toFixed(3)} m` : ""));
    this.readout.textContent = [
      `tick ${snap.tick}  t=${snap.t.toFixed(1)} s  seq ${snap.seq}`,
      `q = [${snap.q.map((v) => v.toFixed(3)).join(", ")}]`,
      `u = [${snap.u.map((v) => v.toFixed(3)).join(", ")}] rad/s`,
      `slack = ${snap.slack.toExponential(2)} m`,
      ...dists,
    ].join("\n");
  }
}
