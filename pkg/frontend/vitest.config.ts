import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["test/**/*.test.ts"],
    // the integration suite boots the python service and waits for
    // frames to accumulate
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
