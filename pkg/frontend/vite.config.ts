import { defineConfig } from "vitest/config";

export default defineConfig({
  server: {
    // the dev server proxies API calls to the python service
    proxy: {
      "/sessions": "http://127.0.0.1:8000",
      "/posts": "http://127.0.0.1:8000",
      "/images": "http://127.0.0.1:8000",
      "/baseline": "http://127.0.0.1:8000",
    },
  },
  test: {
    environment: "jsdom",
    include: ["tests/**/*.test.ts"],
    testTimeout: 30000,
    hookTimeout: 30000,
  },
});
