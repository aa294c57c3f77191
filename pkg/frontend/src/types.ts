// Shapes mirroring the service's JSON documents.

export type Flow = "study_ii" | "study_iii";

export type SessionState =
  | "drafting"
  | "keywords_detected"
  | "images_shown"
  | "submitted";

export type TagOrigin = "extracted" | "top_tfidf" | "emotion" | "title" | "user_added";

export interface Tag {
  text: string;
  weight: number;
  origin: TagOrigin;
}

export interface ImageRef {
  id: string; // session-scoped id used for attach/detach
  ref: string; // content-addressed storage key served at /images/{ref}
  seed: number;
}

export interface PromptDoc {
  mode: string;
  content: string;
  tags: Tag[];
  excluded: string[];
}

export interface Batch {
  images: ImageRef[];
  prompt: PromptDoc;
  created_at: number;
}

export interface SessionSnapshot {
  id: string;
  flow: Flow;
  baseline: boolean;
  state: SessionState;
  draft: { title: string; body: string };
  tags: Tag[];
  history: Batch[]; // newest first
  attached: string[];
  uploaded: string[];
  in_flight: boolean;
  revision: number;
  submitted_post_id: string | null;
}

export interface PostDoc {
  id: string;
  session_id: string;
  title: string;
  body: string;
  images: string[];
  flow: Flow;
  created_at: number;
  tags: Tag[];
}

export type TagOp =
  | { op: "add"; text: string }
  | { op: "edit"; index: number; text: string }
  | { op: "remove"; index: number }
  | { op: "bump"; index: number; direction: "up" | "down" };
