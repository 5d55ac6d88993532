import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "node",
    include: ["tests/**/*.test.ts"],
    // the walkthrough file boots the real service; keep files sequential so
    // only one server runs at a time
    fileParallelism: false,
  },
});
