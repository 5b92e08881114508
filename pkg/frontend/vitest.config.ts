import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "happy-dom",
    // the end-to-end suite talks to a local `sufa serve` process on another
    // port; the browser build itself is served same-origin
    environmentOptions: {
      happyDOM: {
        settings: { fetch: { disableSameOriginPolicy: true } },
      },
    },
    include: ["tests/**/*.test.ts"],
    testTimeout: 60_000,
    hookTimeout: 60_000,
    fileParallelism: false,
  },
});
