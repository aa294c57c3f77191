// Composer page: one active session per tab, optimistic chip updates
// with server reconciliation, and a full refetch after any server error.

import { ApiClient, ApiError } from "./api";
import { renderChipEditor } from "./components/chips";
import { renderImagePanel } from "./components/imagePanel";
import { allows, flowButtons, GuardContext, UiOp, WAITING_LABEL } from "./guards";
import type { Flow, PostDoc, SessionSnapshot } from "./types";

const WEIGHT_MIN = 0.1;
const WEIGHT_MAX = 2.0;

export class ComposerApp {
  session: SessionSnapshot | null = null;
  posts: PostDoc[] = [];
  busy = false;
  zoomed: string | null = null;
  toast: string | null = null;

  private pending: Promise<void> = Promise.resolve();

  constructor(
    private mount: HTMLElement,
    readonly api: ApiClient,
  ) {}

  async start(sessionId: string | null, flow: Flow, baseline: boolean): Promise<void> {
    this.session = sessionId
      ? await this.api.getSession(sessionId)
      : await this.api.createSession(flow, baseline);
    if (this.session.state === "submitted") {
      this.posts = await this.api.listPosts();
    }
    this.render();
  }

  ctx(): GuardContext {
    const s = this.session;
    if (!s) throw new Error("no session loaded");
    return {
      flow: s.flow,
      baseline: s.baseline,
      state: s.state,
      busy: this.busy || s.in_flight,
    };
  }

  can(op: UiOp): boolean {
    return this.session !== null && allows(this.ctx(), op);
  }

  whenIdle(): Promise<void> {
    return this.pending;
  }

  // Serialize actions; on failure surface a toast and resync from the
  // server so the view matches reality again.
  private run(op: UiOp | null, action: () => Promise<void>): Promise<void> {
    const step = async () => {
      if (op !== null && !this.can(op)) return; // guard: never send a doomed request
      try {
        this.toast = null;
        await action();
      } catch (error) {
        this.toast = error instanceof ApiError ? error.detail : String(error);
        await this.resync();
      }
      this.render();
    };
    this.pending = this.pending.then(step, step);
    return this.pending;
  }

  private async resync(): Promise<void> {
    if (!this.session) return;
    this.session = await this.api.getSession(this.session.id);
    if (this.session.state === "submitted") {
      this.posts = await this.api.listPosts();
    }
  }

  saveDraft(title: string, body: string): Promise<void> {
    return this.run("edit_draft", async () => {
      this.session = await this.api.patchDraft(this.session!.id, { title, body });
    });
  }

  detectKeywords(): Promise<void> {
    return this.run("detect_keywords", async () => {
      this.session = await this.api.detectKeywords(this.session!.id);
    });
  }

  generate(mode: "keyword_based" | "content_based"): Promise<void> {
    return this.run("generate", async () => {
      this.busy = true;
      this.render(); // the flow buttons become the waiting label
      try {
        this.session = await this.api.generate(this.session!.id, mode);
      } finally {
        this.busy = false;
      }
    });
  }

  addTag(text: string): Promise<void> {
    return this.run("edit_tags", async () => {
      this.session = await this.api.tagOp(this.session!.id, { op: "add", text });
    });
  }

  editTag(index: number, text: string): Promise<void> {
    return this.run("edit_tags", async () => {
      this.session = await this.api.tagOp(this.session!.id, { op: "edit", index, text });
    });
  }

  removeTag(index: number): Promise<void> {
    return this.run("edit_tags", async () => {
      this.session = await this.api.tagOp(this.session!.id, { op: "remove", index });
    });
  }

  bumpTag(index: number, direction: "up" | "down"): Promise<void> {
    return this.run("edit_tags", async () => {
      // optimistic: step the chip locally, reconcile with the response
      const tags = this.session!.tags;
      const tag = tags[index];
      if (tag) {
        const delta = direction === "up" ? 0.1 : -0.1;
        const next = Math.min(WEIGHT_MAX, Math.max(WEIGHT_MIN, tag.weight + delta));
        tags[index] = { ...tag, weight: Math.round(next * 10) / 10 };
        this.render();
      }
      this.session = await this.api.tagOp(this.session!.id, {
        op: "bump",
        index,
        direction,
      });
    });
  }

  backToEdit(): Promise<void> {
    return this.run("back_to_edit", async () => {
      this.session = await this.api.backToEdit(this.session!.id);
    });
  }

  toggleAttach(imageId: string, attached: boolean): Promise<void> {
    return this.run("attach", async () => {
      this.session = attached
        ? await this.api.detach(this.session!.id, imageId)
        : await this.api.attach(this.session!.id, imageId);
    });
  }

  uploadBaseline(data: Blob | ArrayBuffer): Promise<void> {
    return this.run("upload", async () => {
      await this.api.baselineUpload(this.session!.id, data);
      await this.resync();
    });
  }

  submit(): Promise<void> {
    return this.run("submit", async () => {
      await this.api.submit(this.session!.id);
      await this.resync();
    });
  }

  setZoom(imageId: string | null): void {
    this.zoomed = imageId;
    this.render();
  }

  // --- rendering -----------------------------------------------------------

  render(): void {
    const s = this.session;
    this.mount.replaceChildren();
    if (!s) return;

    if (this.toast) {
      const toast = document.createElement("div");
      toast.className = "toast";
      toast.textContent = this.toast;
      this.mount.appendChild(toast);
    }

    this.mount.appendChild(this.renderDraftArea(s));
    this.mount.appendChild(this.renderFlowButtons());

    if (!s.baseline && s.state !== "drafting") {
      const chips = renderChipEditor(s.tags, this.can("edit_tags"), {
        onBump: (i, d) => void this.bumpTag(i, d),
        onRemove: (i) => void this.removeTag(i),
        onEdit: (i, text) => void this.editTag(i, text),
        onAdd: (text) => void this.addTag(text),
      });
      this.mount.appendChild(chips);
    }

    if (s.history.length > 0) {
      this.mount.appendChild(
        renderImagePanel(s.history, s.attached, this.zoomed, this.can("attach"), {
          imageUrl: (ref) => this.api.imageUrl(ref),
          onToggleAttach: (id, attached) => void this.toggleAttach(id, attached),
          onZoom: (id) => this.setZoom(id),
        }),
      );
    }

    if (s.state === "submitted") {
      this.mount.appendChild(this.renderPostListing());
    }
  }

  private renderDraftArea(s: SessionSnapshot): HTMLElement {
    const area = document.createElement("section");
    area.className = "draft-area";
    const editable = this.can("edit_draft");

    const title = document.createElement("input");
    title.id = "draft-title";
    title.placeholder = "Title";
    title.value = s.draft.title;
    title.disabled = !editable;

    const body = document.createElement("textarea");
    body.id = "draft-body";
    body.placeholder = "Write your post...";
    body.value = s.draft.body;
    body.disabled = !editable;

    const onChange = () => void this.saveDraft(title.value, body.value);
    title.addEventListener("change", onChange);
    body.addEventListener("change", onChange);

    area.append(title, body);
    return area;
  }

  private renderFlowButtons(): HTMLElement {
    const bar = document.createElement("section");
    bar.className = "flow-buttons";
    const controls = flowButtons(this.ctx());

    if (controls.waiting) {
      const waiting = document.createElement("span");
      waiting.className = "waiting-label";
      waiting.textContent = WAITING_LABEL;
      bar.appendChild(waiting);
      return bar;
    }

    const actions: Record<string, { label: string; onClick: () => void }> = {
      detect_keywords: {
        label: "Detect keywords",
        onClick: () => void this.detectKeywords(),
      },
      generate_images: {
        label: "Generate images",
        onClick: () => void this.generate("keyword_based"),
      },
      keywords_based: {
        label: "Keywords based",
        onClick: () => void this.generate("keyword_based"),
      },
      content_based: {
        label: "Content based",
        onClick: () => void this.generate("content_based"),
      },
      back_to_edit: {
        label: "Back to edit",
        onClick: () => void this.backToEdit(),
      },
      continue_to_submit: {
        label: "Continue to submit",
        onClick: () => void this.submit(),
      },
      choose_file: {
        label: "Choose file",
        onClick: () => this.openFilePicker(),
      },
      submit_post: {
        label: "Submit",
        onClick: () => void this.submit(),
      },
    };

    for (const name of controls.buttons) {
      const { label, onClick } = actions[name];
      const button = document.createElement("button");
      button.className = `flow-button flow-${name}`;
      button.textContent = label;
      button.addEventListener("click", onClick);
      bar.appendChild(button);
    }
    return bar;
  }

  private openFilePicker(): void {
    const input = document.createElement("input");
    input.type = "file";
    input.accept = "image/*";
    input.addEventListener("change", () => {
      const file = input.files?.[0];
      if (file) void this.uploadBaseline(file);
    });
    input.click();
  }

  private renderPostListing(): HTMLElement {
    const section = document.createElement("section");
    section.className = "post-listing";
    for (const post of this.posts) {
      const card = document.createElement("article");
      card.className = "post-card";
      const title = document.createElement("h3");
      title.textContent = post.title;
      const body = document.createElement("p");
      body.textContent = post.body;
      card.append(title, body);
      for (const ref of post.images) {
        const img = document.createElement("img");
        img.className = "post-image";
        img.src = this.api.imageUrl(ref);
        img.alt = "attached image";
        card.appendChild(img);
      }
      section.appendChild(card);
    }
    return section;
  }
}
