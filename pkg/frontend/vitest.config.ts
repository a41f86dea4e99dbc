import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    globalSetup: "./tests/setup/fixtures.ts",
    testTimeout: 30000,
  },
});
