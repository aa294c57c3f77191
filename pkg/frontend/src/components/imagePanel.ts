// Image panel: newest batch on top, four tiles per row, click-to-zoom,
// and an attach toggle per tile. Broken images fall back to a
// placeholder tile.

import type { Batch } from "../types";

export interface ImagePanelHandlers {
  imageUrl(ref: string): string;
  onToggleAttach(imageId: string, attached: boolean): void;
  onZoom(imageId: string | null): void;
}

export function renderImagePanel(
  history: Batch[],
  attached: string[],
  zoomed: string | null,
  canAttach: boolean,
  handlers: ImagePanelHandlers,
): HTMLElement {
  const root = document.createElement("div");
  root.className = "image-panel";
  const attachedSet = new Set(attached);

  for (const [batchIndex, batch] of history.entries()) {
    const row = document.createElement("div");
    row.className = "image-batch";
    row.dataset.batch = String(batchIndex);

    for (const image of batch.images) {
      const tile = document.createElement("figure");
      tile.className = "image-tile";
      tile.dataset.imageId = image.id;

      const img = document.createElement("img");
      img.src = handlers.imageUrl(image.ref);
      img.alt = `generated image ${image.id}`;
      img.addEventListener("error", () => {
        tile.classList.add("placeholder");
        img.remove();
      });
      img.addEventListener("click", () =>
        handlers.onZoom(zoomed === image.id ? null : image.id),
      );
      tile.appendChild(img);

      if (zoomed === image.id) tile.classList.add("zoomed");
      if (attachedSet.has(image.id)) tile.classList.add("attached");

      if (canAttach) {
        const toggle = document.createElement("button");
        toggle.className = "attach-toggle";
        toggle.textContent = attachedSet.has(image.id) ? "detach" : "attach";
        toggle.addEventListener("click", () =>
          handlers.onToggleAttach(image.id, attachedSet.has(image.id)),
        );
        tile.appendChild(toggle);
      }
      row.appendChild(tile);
    }
    root.appendChild(row);
  }
  return root;
}
