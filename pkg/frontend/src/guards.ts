// The client-side copy of the composer transition table. Buttons and
// guards both derive from it, so an in-sync view never issues a request
// the server would reject.

import type { Flow, SessionState } from "./types";

export const WAITING_LABEL = "Waiting for about 6 seconds";

export type UiOp =
  | "edit_draft"
  | "detect_keywords"
  | "generate"
  | "edit_tags"
  | "back_to_edit"
  | "attach"
  | "upload"
  | "submit";

export interface GuardContext {
  flow: Flow;
  baseline: boolean;
  state: SessionState;
  busy: boolean;
}

export function allows(ctx: GuardContext, op: UiOp): boolean {
  const { flow, baseline, state, busy } = ctx;
  if (state === "submitted") return false;
  if (busy && op === "generate") return false;
  switch (op) {
    case "edit_draft":
      return state === "drafting";
    case "detect_keywords":
      return flow === "study_iii" && !baseline && state === "drafting";
    case "generate":
      if (baseline) return false;
      return flow === "study_iii"
        ? state === "keywords_detected" || state === "images_shown"
        : state === "drafting" || state === "images_shown";
    case "edit_tags":
      return state === "keywords_detected" || state === "images_shown";
    case "back_to_edit":
      return flow === "study_iii"
        ? state === "keywords_detected" || state === "images_shown"
        : state === "images_shown";
    case "attach":
      return state === "images_shown";
    case "upload":
      return baseline && state === "drafting";
    case "submit":
      return baseline ? state === "drafting" : state === "images_shown";
  }
}

export type FlowButton =
  | "detect_keywords"
  | "generate_images"
  | "keywords_based"
  | "content_based"
  | "back_to_edit"
  | "continue_to_submit"
  | "choose_file"
  | "submit_post";

export interface FlowControls {
  waiting: boolean;
  buttons: FlowButton[];
}

export function flowButtons(ctx: GuardContext): FlowControls {
  if (ctx.busy) return { waiting: true, buttons: [] };
  if (ctx.state === "submitted") return { waiting: false, buttons: [] };
  if (ctx.baseline) {
    return ctx.state === "drafting"
      ? { waiting: false, buttons: ["choose_file", "submit_post"] }
      : { waiting: false, buttons: [] };
  }
  switch (ctx.state) {
    case "drafting":
      return ctx.flow === "study_iii"
        ? { waiting: false, buttons: ["detect_keywords"] }
        : { waiting: false, buttons: ["generate_images"] };
    case "keywords_detected":
      return { waiting: false, buttons: ["generate_images"] };
    case "images_shown":
      return {
        waiting: false,
        buttons: [
          "back_to_edit",
          "continue_to_submit",
          "keywords_based",
          "content_based",
        ],
      };
  }
}
