// Reconnecting WebSocket wrapper.
//
// Commands are fire-and-forget: while disconnected they are dropped, never
// queued, so a reconnect cannot replay stale motion. The sequence counter
// lives here and survives reconnects, keeping snapshots' seq monotone.

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: string }) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export interface BridgeLinkOptions {
  url: string;
  onMessage: (raw: string) => void;
  onStatus: (connected: boolean) => void;
  factory?: SocketFactory;
  backoffBaseMs?: number;
  backoffMaxMs?: number;
  setTimer?: (fn: () => void, ms: number) => unknown;
}

export class BridgeLink {
  private ws: SocketLike | null = null;
  private seq = 0;
  private attempts = 0;
  private closed = false;
  private readonly opts: Required<Pick<BridgeLinkOptions, "backoffBaseMs" | "backoffMaxMs">> &
    BridgeLinkOptions;

  connected = false;

  constructor(opts: BridgeLinkOptions) {
    this.opts = { backoffBaseMs: 250, backoffMaxMs: 5000, ...opts };
    this.open();
  }

  private open(): void {
    if (this.closed) return;
    const factory: SocketFactory =
      this.opts.factory ?? ((url) => new WebSocket(url) as unknown as SocketLike);
    const ws = factory(this.opts.url);
    this.ws = ws;
    ws.onopen = () => {
      this.attempts = 0;
      this.connected = true;
      this.opts.onStatus(true);
    };
    ws.onmessage = (ev) => this.opts.onMessage(ev.data);
    ws.onerror = () => {
      /* onclose follows and drives the retry */
    };
    ws.onclose = () => {
      const wasConnected = this.connected;
      this.connected = false;
      this.ws = null;
      if (wasConnected) this.opts.onStatus(false);
      this.scheduleReconnect();
    };
  }

  private scheduleReconnect(): void {
    if (this.closed) return;
    const delay = Math.min(
      this.opts.backoffMaxMs,
      this.opts.backoffBaseMs * 2 ** this.attempts,
    );
    this.attempts += 1;
    const timer = this.opts.setTimer ?? ((fn, ms) => setTimeout(fn, ms));
    timer(() => this.open(), delay);
  }

  /** Next command sequence number; monotone across reconnects. */
  nextSeq(): number {
    this.seq += 1;
    return this.seq;
  }

  /** Send raw frame; dropped (returns false) when disconnected. */
  send(raw: string): boolean {
    if (!this.connected || this.ws === null) return false;
    this.ws.send(raw);
    return true;
  }

  close(): void {
    this.closed = true;
    this.ws?.close();
  }
}
