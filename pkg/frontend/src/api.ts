import type { Flow, PostDoc, SessionSnapshot, TagOp } from "./types";

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function parseError(response: Response): Promise<never> {
  let detail = response.statusText;
  try {
    const body = await response.json();
    if (typeof body.detail === "string") detail = body.detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(response.status, detail);
}

export class ApiClient {
  constructor(private base: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.base + path, {
      headers: { "Content-Type": "application/json" },
      ...init,
    });
    if (!response.ok) await parseError(response);
    return (await response.json()) as T;
  }

  createSession(flow: Flow, baseline = false): Promise<SessionSnapshot> {
    return this.request("/sessions", {
      method: "POST",
      body: JSON.stringify({ flow, baseline }),
    });
  }

  getSession(id: string): Promise<SessionSnapshot> {
    return this.request(`/sessions/${id}`);
  }

  patchDraft(
    id: string,
    draft: { title?: string; body?: string },
  ): Promise<SessionSnapshot> {
    return this.request(`/sessions/${id}/draft`, {
      method: "PATCH",
      body: JSON.stringify(draft),
    });
  }

  detectKeywords(id: string): Promise<SessionSnapshot> {
    return this.request(`/sessions/${id}/detect-keywords`, { method: "POST" });
  }

  tagOp(id: string, op: TagOp): Promise<SessionSnapshot> {
    return this.request(`/sessions/${id}/tags`, {
      method: "POST",
      body: JSON.stringify(op),
    });
  }

  generate(
    id: string,
    mode: "keyword_based" | "content_based",
    seed?: number,
  ): Promise<SessionSnapshot> {
    return this.request(`/sessions/${id}/generate`, {
      method: "POST",
      body: JSON.stringify(seed === undefined ? { mode } : { mode, seed }),
    });
  }

  backToEdit(id: string): Promise<SessionSnapshot> {
    return this.request(`/sessions/${id}/back-to-edit`, { method: "POST" });
  }

  attach(id: string, imageId: string): Promise<SessionSnapshot> {
    return this.request(`/sessions/${id}/attach`, {
      method: "POST",
      body: JSON.stringify({ image_id: imageId }),
    });
  }

  detach(id: string, imageId: string): Promise<SessionSnapshot> {
    return this.request(`/sessions/${id}/detach`, {
      method: "POST",
      body: JSON.stringify({ image_id: imageId }),
    });
  }

  submit(id: string): Promise<PostDoc> {
    return this.request(`/sessions/${id}/submit`, { method: "POST" });
  }

  listPosts(): Promise<PostDoc[]> {
    return this.request("/posts");
  }

  imageUrl(ref: string): string {
    return `${this.base}/images/${ref}`;
  }

  async baselineUpload(id: string, data: Blob | ArrayBuffer): Promise<string> {
    const response = await fetch(
      `${this.base}/baseline/upload?session_id=${encodeURIComponent(id)}`,
      { method: "POST", body: data },
    );
    if (!response.ok) await parseError(response);
    const body = (await response.json()) as { image_id: string };
    return body.image_id;
  }
}
