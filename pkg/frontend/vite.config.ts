import { defineConfig } from "vite";

// Dev server proxies API and websocket traffic to the bridge, so the UI is
// served from one origin. Set HULLMPC_BRIDGE to point somewhere else.
const bridge = process.env.HULLMPC_BRIDGE ?? "http://127.0.0.1:8720";

export default defineConfig({
  server: {
    proxy: {
      "/session": bridge,
      "/scenarios": bridge,
      "/health": bridge,
      "/ws": { target: bridge, ws: true },
    },
  },
  test: {
    environment: "node",
  },
});
