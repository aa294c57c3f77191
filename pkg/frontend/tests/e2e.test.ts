// Scripted browser test: boots the real HTTP service (mock generation
// backend) and drives the composer DOM through the whole keyword-first
// flow, exactly as a user would.

import { spawn, ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import { ComposerApp } from "../src/app";
import { WAITING_LABEL } from "../src/guards";

const REPO_ROOT = resolve(import.meta.dirname, "..", "..");
const PORT = 18000 + Math.floor(Math.random() * 10000);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;
let dataDir: string;

async function waitForService(): Promise<void> {
  for (let attempt = 0; attempt < 100; attempt++) {
    try {
      const response = await fetch(`${BASE}/posts`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 200));
  }
  throw new Error("service did not come up");
}

beforeAll(async () => {
  dataDir = mkdtempSync(join(tmpdir(), "composer-e2e-"));
  server = spawn("python3", ["scripts/serve_demo.py"], {
    cwd: REPO_ROOT,
    env: {
      ...process.env,
      POSTIMAGER_PORT: String(PORT),
      POSTIMAGER_DATA_DIR: dataDir,
    },
    stdio: "ignore",
  });
  await waitForService();
});

afterAll(() => {
  server?.kill();
  if (dataDir) rmSync(dataDir, { recursive: true, force: true });
});

const flush = async (times = 3) => {
  for (let i = 0; i < times; i++) await Promise.resolve();
};

function clickButton(mount: HTMLElement, cls: string): void {
  const button = mount.querySelector(`.flow-${cls}`) as HTMLButtonElement | null;
  expect(button, `expected a .flow-${cls} button`).not.toBeNull();
  button!.click();
}

describe("composer end to end", () => {
  it("drafts, detects, bumps, generates, attaches, and submits", async () => {
    const mount = document.createElement("div");
    document.body.appendChild(mount);
    const app = new ComposerApp(mount, new ApiClient(BASE));
    await app.start(null, "study_iii", false);

    // draft
    const title = mount.querySelector("#draft-title") as HTMLInputElement;
    const body = mount.querySelector("#draft-body") as HTMLTextAreaElement;
    expect(title.disabled).toBe(false);
    title.value = "Feeling hopeless";
    body.value =
      "I cry alone every night under the exam pressure and the advisor deadline.";
    body.dispatchEvent(new Event("change"));
    await app.whenIdle();
    expect(app.session!.draft.body).toContain("exam pressure");

    // detect keywords
    clickButton(mount, "detect_keywords");
    await app.whenIdle();
    expect(app.session!.state).toBe("keywords_detected");
    const chipLabels = [...mount.querySelectorAll(".chip-label")].map(
      (n) => n.textContent,
    );
    expect(chipLabels.some((l) => l === "sadness: 1.3")).toBe(true);

    // illegal draft edits are blocked client-side: inputs disabled and
    // the guarded action never issues a request
    const lockedBody = mount.querySelector("#draft-body") as HTMLTextAreaElement;
    expect(lockedBody.disabled).toBe(true);
    expect(app.can("edit_draft")).toBe(false);
    const revisionBefore = app.session!.revision;
    await app.saveDraft("hacked", "hacked");
    expect(app.session!.draft.body).toContain("exam pressure");
    expect(app.session!.revision).toBe(revisionBefore); // nothing was sent
    expect(mount.querySelector(".toast")).toBeNull(); // and no server error

    // bump the first chip: the displayed weight steps by 0.1
    const firstLabel = mount.querySelector(".chip-label")!.textContent!;
    const [text, weight] = firstLabel.split(": ");
    (mount.querySelector(".chip-up") as HTMLButtonElement).click();
    await app.whenIdle();
    const bumped = (Number(weight) + 0.1).toFixed(1);
    expect(mount.querySelector(".chip-label")!.textContent).toBe(`${text}: ${bumped}`);

    // generate: the waiting label replaces the buttons while in flight
    clickButton(mount, "generate_images");
    await flush();
    const waiting = mount.querySelector(".waiting-label");
    expect(waiting).not.toBeNull();
    expect(waiting!.textContent).toBe(WAITING_LABEL);
    expect(mount.querySelector(".flow-button")).toBeNull();
    await app.whenIdle();
    expect(app.session!.state).toBe("images_shown");
    const tiles = mount.querySelectorAll(".image-tile");
    expect(tiles.length).toBe(4);

    // attach the second image
    const toggles = mount.querySelectorAll(".attach-toggle");
    (toggles[1] as HTMLButtonElement).click();
    await app.whenIdle();
    expect(app.session!.attached.length).toBe(1);
    const attachedId = app.session!.attached[0];
    const attachedRef = app
      .session!.history[0].images.find((i) => i.id === attachedId)!.ref;

    // submit and check the post listing shows the attached image
    clickButton(mount, "continue_to_submit");
    await app.whenIdle();
    expect(app.session!.state).toBe("submitted");
    expect(mount.querySelector(".flow-button")).toBeNull();
    const postImages = [...mount.querySelectorAll(".post-image")].map(
      (img) => (img as HTMLImageElement).src,
    );
    expect(postImages.length).toBe(1);
    expect(postImages[0]).toContain(attachedRef);

    // the image bytes are really served
    const png = await fetch(`${BASE}/images/${attachedRef}`);
    expect(png.ok).toBe(true);
    expect((await png.arrayBuffer()).byteLength).toBeGreaterThan(0);

    document.body.removeChild(mount);
  });

  it("runs the baseline upload flow", async () => {
    const mount = document.createElement("div");
    document.body.appendChild(mount);
    const app = new ComposerApp(mount, new ApiClient(BASE));
    await app.start(null, "study_ii", true);

    const body = mount.querySelector("#draft-body") as HTMLTextAreaElement;
    body.value = "A plain post with a local image.";
    body.dispatchEvent(new Event("change"));
    await app.whenIdle();

    // baseline controls are upload + submit; no generation offered
    expect(mount.querySelector(".flow-choose_file")).not.toBeNull();
    expect(mount.querySelector(".flow-generate_images")).toBeNull();

    await app.uploadBaseline(new Uint8Array([137, 80, 78, 71]).buffer);
    await app.whenIdle();
    expect(app.session!.uploaded.length).toBe(1);

    clickButton(mount, "submit_post");
    await app.whenIdle();
    expect(app.session!.state).toBe("submitted");
    const posts = await app.api.listPosts();
    expect(posts[0].images.length).toBe(1);

    document.body.removeChild(mount);
  });

  it("recovers view/server consistency after a rejected request", async () => {
    const mount = document.createElement("div");
    document.body.appendChild(mount);
    const app = new ComposerApp(mount, new ApiClient(BASE));
    await app.start(null, "study_iii", false);
    const body = mount.querySelector("#draft-body") as HTMLTextAreaElement;
    body.value = "I cry alone tonight.";
    body.dispatchEvent(new Event("change"));
    await app.whenIdle();
    clickButton(mount, "detect_keywords");
    await app.whenIdle();

    // force a request the server rejects (bad index bypasses the guard)
    await app.removeTag(999);
    expect(mount.querySelector(".toast")).not.toBeNull();
    // one refetch restored consistency: chips match the server snapshot
    const fresh = await app.api.getSession(app.session!.id);
    expect(app.session!.tags).toEqual(fresh.tags);
    expect(app.session!.state).toBe(fresh.state);

    document.body.removeChild(mount);
  });
});
