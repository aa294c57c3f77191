import { ApiClient } from "./api";
import { ComposerApp } from "./app";
import type { Flow } from "./types";

// Session id lives in the URL hash so a tab can be reloaded; flow and
// baseline mode come from query parameters on first visit.
async function boot(): Promise<void> {
  const mount = document.getElementById("app");
  if (!mount) throw new Error("missing #app mount point");

  const params = new URLSearchParams(window.location.search);
  const flow: Flow = params.get("flow") === "study_iii" ? "study_iii" : "study_ii";
  const baseline = params.get("baseline") === "1";
  const sessionId = window.location.hash.slice(1) || null;

  const app = new ComposerApp(mount, new ApiClient(""));
  await app.start(sessionId, flow, baseline);
  if (!sessionId && app.session) {
    window.location.hash = app.session.id;
  }
}

void boot();
