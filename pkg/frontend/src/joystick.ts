// Virtual joystick: 2-axis stick for (phi_x, phi_y) rates plus Q/E keys for
// the third axis. Emits the desired end-effector velocity at a fixed 10 Hz
// cadence; releasing everything emits an explicit zero command (dead-man).

import { clampToLimits, Vec3 } from "./protocol";

export interface JoystickState {
  x: number; // stick horizontal in [-1, 1] -> phi_x rate
  y: number; // stick vertical in [-1, 1]   -> phi_y rate
  z: number; // -1 | 0 | +1 from Q/E keys   -> phi_z rate
}

export const EMIT_PERIOD_MS = 100; // matches the controller's Ts = 0.1 s

export class CommandEmitter {
  private state: JoystickState = { x: 0, y: 0, z: 0 };
  private limits: Vec3 = [0.5, 0.5, 0.5];
  private scale = 1.0;
  private timer: unknown = null;
  private lastWasZero = false;

  constructor(
    private readonly emit: (v: Vec3) => void,
    private readonly setInterval_: (fn: () => void, ms: number) => unknown = (
      fn,
      ms,
    ) => setInterval(fn, ms),
    private readonly clearInterval_: (t: unknown) => void = (t) =>
      clearInterval(t as number),
  ) {}

  setLimits(limits: Vec3): void {
    this.limits = limits;
  }

  setScale(scale: number): void {
    this.scale = scale;
  }

  update(state: Partial<JoystickState>): void {
    this.state = { ...this.state, ...state };
  }

  release(): void {
    this.state = { x: 0, y: 0, z: 0 };
  }

  /** Velocity command for the current stick state, clamped to limits. */
  command(): Vec3 {
    const raw: Vec3 = [
      this.state.x * this.limits[0] * this.scale,
      this.state.y * this.limits[1] * this.scale,
      this.state.z * this.limits[2] * this.scale,
    ];
    return clampToLimits(raw, this.limits);
  }

  start(): void {
    if (this.timer !== null) return;
    this.timer = this.setInterval_(() => this.tick(), EMIT_PERIOD_MS);
  }

  stop(): void {
    if (this.timer !== null) {
      this.clearInterval_(this.timer);
      this.timer = null;
    }
  }

  private tick(): void {
    const v = this.command();
    const isZero = v[0] === 0 && v[1] === 0 && v[2] === 0;
    // always emit while deflected; on release emit the zero exactly once so
    // the dead-man fires immediately rather than waiting for the watchdog
    if (!isZero || !this.lastWasZero) this.emit(v);
    this.lastWasZero = isZero;
  }
}

/** Wire pointer events from a DOM pad element to stick deflections. */
export function attachStick(
  pad: HTMLElement,
  knob: HTMLElement,
  emitter: CommandEmitter,
): void {
  let active = false;

  const apply = (ev: PointerEvent) => {
    const rect = pad.getBoundingClientRect();
    const r = rect.width / 2;
    let dx = (ev.clientX - rect.left - r) / r;
    let dy = (ev.clientY - rect.top - r) / r;
    const mag = Math.hypot(dx, dy);
    if (mag > 1) {
      dx /= mag;
      dy /= mag;
    }
    knob.style.transform = `translate(${dx * r * 0.6}px, ${dy * r * 0.6}px)`;
    // screen up = positive phi_y rate, screen right = positive phi_x rate
    emitter.update({ x: dx, y: -dy });
  };

  pad.addEventListener("pointerdown", (ev) => {
    active = true;
    pad.setPointerCapture(ev.pointerId);
    apply(ev);
  });
  pad.addEventListener("pointermove", (ev) => {
    if (active) apply(ev);
  });
  const end = () => {
    active = false;
    knob.style.transform = "translate(0px, 0px)";
    emitter.update({ x: 0, y: 0 });
  };
  pad.addEventListener("pointerup", end);
  pad.addEventListener("pointercancel", end);

  window.addEventListener("keydown", (ev) => {
    if (ev.key === "q" || ev.key === "Q") emitter.update({ z: 1 });
    if (ev.key === "e" || ev.key === "E") emitter.update({ z: -1 });
  });
  window.addEventListener("keyup", (ev) => {
    if (["q", "Q", "e", "E"].includes(ev.key)) emitter.update({ z: 0 });
  });
}
