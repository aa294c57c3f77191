// Keyword chip editor: each chip shows "text: weight" with weight
// steppers, delete, inline text edit, and an add-keyword input.

import type { Tag } from "../types";

export interface ChipHandlers {
  onBump(index: number, direction: "up" | "down"): void;
  onRemove(index: number): void;
  onEdit(index: number, text: string): void;
  onAdd(text: string): void;
}

export function formatWeight(weight: number): string {
  return weight.toFixed(1);
}

export function renderChipEditor(
  tags: Tag[],
  enabled: boolean,
  handlers: ChipHandlers,
): HTMLElement {
  const root = document.createElement("div");
  root.className = "chip-editor";

  for (const [index, tag] of tags.entries()) {
    const chip = document.createElement("span");
    chip.className = `chip chip-${tag.origin}`;
    chip.dataset.index = String(index);

    const label = document.createElement("span");
    label.className = "chip-label";
    label.textContent = `${tag.text}: ${formatWeight(tag.weight)}`;
    if (enabled) {
      label.title = "click to edit";
      label.addEventListener("click", () => {
        const next = window.prompt("Edit keyword", tag.text);
        if (next !== null && next.trim()) handlers.onEdit(index, next.trim());
      });
    }
    chip.appendChild(label);

    if (enabled) {
      const up = document.createElement("button");
      up.className = "chip-up";
      up.textContent = "↑";
      up.addEventListener("click", () => handlers.onBump(index, "up"));
      const down = document.createElement("button");
      down.className = "chip-down";
      down.textContent = "↓";
      down.addEventListener("click", () => handlers.onBump(index, "down"));
      const remove = document.createElement("button");
      remove.className = "chip-remove";
      remove.textContent = "x";
      remove.addEventListener("click", () => handlers.onRemove(index));
      chip.append(up, down, remove);
    }
    root.appendChild(chip);
  }

  if (enabled) {
    const add = document.createElement("span");
    add.className = "chip-add";
    const input = document.createElement("input");
    input.className = "chip-add-input";
    input.placeholder = "new keyword";
    const button = document.createElement("button");
    button.className = "chip-add-button";
    button.textContent = "+";
    button.addEventListener("click", () => {
      const text = input.value.trim();
      if (!text) {
        input.classList.add("invalid"); // empty adds never reach the server
        return;
      }
      input.classList.remove("invalid");
      input.value = "";
      handlers.onAdd(text);
    });
    add.append(input, button);
    root.appendChild(add);
  }
  return root;
}
