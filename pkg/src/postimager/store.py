"""File-backed JSON persistence for sessions and posts.

Writes go to a temp file and rename into place, so a crash never leaves a
half-written document. Posts are append-only. Corrupt documents are skipped
with a logged warning at load time; everything else still loads.
"""

from __future__ import annotations

import json
import logging
import os
from pathlib import Path

from .promptgen import KeywordTag, PostDraft, PromptMode, PromptSpec, TagOrigin
from .session import (
    ComposerSession,
    Flow,
    ImageBatch,
    ImageRecord,
    Post,
    SessionState,
)

log = logging.getLogger(__name__)


def prompt_spec_to_dict(spec: PromptSpec) -> dict:
    return {
        "mode": spec.mode.value,
        "content": spec.content,
        "tags": [tag_to_dict(t) for t in spec.tags],
        "excluded": list(spec.excluded),
    }


def prompt_spec_from_dict(doc: dict) -> PromptSpec:
    return PromptSpec(
        mode=PromptMode(doc["mode"]),
        content=doc.get("content", ""),
        tags=tuple(tag_from_dict(t) for t in doc.get("tags", [])),
        excluded=tuple(doc.get("excluded", [])),
    )


def tag_to_dict(tag: KeywordTag) -> dict:
    return {"text": tag.text, "weight": tag.weight, "origin": tag.origin.value}


def tag_from_dict(doc: dict) -> KeywordTag:
    return KeywordTag(doc["text"], doc["weight"], TagOrigin(doc["origin"]))


def session_to_dict(session: ComposerSession) -> dict:
    return {
        "id": session.id,
        "flow": session.flow.value,
        "baseline": session.baseline,
        "state": session.state.value,
        "draft": {"title": session.draft.title, "body": session.draft.body},
        "tags": [tag_to_dict(t) for t in session.tags],
        "history": [
            {
                "images": [
                    {"id": i.id, "ref": i.ref, "seed": i.seed} for i in b.images
                ],
                "prompt": prompt_spec_to_dict(b.prompt),
                "created_at": b.created_at,
            }
            for b in session.history
        ],
        "attached": list(session.attached),
        "uploaded": list(session.uploaded),
        "revision": session.revision,
        "submitted_post_id": session.submitted_post_id,
        "image_seq": session._image_seq,
    }


def session_from_dict(doc: dict) -> ComposerSession:
    session = ComposerSession(
        flow=Flow(doc["flow"]),
        baseline=doc.get("baseline", False),
        id=doc["id"],
        state=SessionState(doc["state"]),
        draft=PostDraft(
            title=doc["draft"].get("title", ""), body=doc["draft"].get("body", "")
        ),
        tags=[tag_from_dict(t) for t in doc.get("tags", [])],
        attached=list(doc.get("attached", [])),
        uploaded=list(doc.get("uploaded", [])),
        revision=doc.get("revision", 0),
        submitted_post_id=doc.get("submitted_post_id"),
    )
    session.history = [
        ImageBatch(
            images=tuple(
                ImageRecord(i["id"], i["ref"], i["seed"]) for i in b["images"]
            ),
            prompt=prompt_spec_from_dict(b["prompt"]),
            created_at=b["created_at"],
        )
        for b in doc.get("history", [])
    ]
    # In-flight rounds never survive a restart.
    session.in_flight = False
    session._image_seq = doc.get("image_seq", 0)
    return session


def post_to_dict(post: Post) -> dict:
    return {
        "id": post.id,
        "session_id": post.session_id,
        "title": post.title,
        "body": post.body,
        "images": list(post.images),
        "flow": post.flow.value,
        "created_at": post.created_at,
        "tags": [tag_to_dict(t) for t in post.tags],
    }


def post_from_dict(doc: dict) -> Post:
    return Post(
        id=doc["id"],
        session_id=doc["session_id"],
        title=doc["title"],
        body=doc["body"],
        images=tuple(doc.get("images", [])),
        flow=Flow(doc["flow"]),
        created_at=doc["created_at"],
        tags=tuple(tag_from_dict(t) for t in doc.get("tags", [])),
    )


class JsonStore:
    def __init__(self, data_dir: Path | str):
        self.root = Path(data_dir)
        self.sessions_dir = self.root / "sessions"
        self.posts_dir = self.root / "posts"
        self.sessions_dir.mkdir(parents=True, exist_ok=True)
        self.posts_dir.mkdir(parents=True, exist_ok=True)

    def _write_atomic(self, path: Path, doc: dict) -> None:
        tmp = path.with_suffix(".tmp")
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1, sort_keys=True)
            fh.flush()
            os.fsync(fh.fileno())
        tmp.replace(path)

    def save_session(self, session: ComposerSession) -> None:
        session.revision += 1
        self._write_atomic(
            self.sessions_dir / f"{session.id}.json", session_to_dict(session)
        )

    def save_post(self, post: Post) -> None:
        path = self.posts_dir / f"{post.id}.json"
        if path.exists():
            raise FileExistsError(f"posts are append-only: {path}")
        self._write_atomic(path, post_to_dict(post))

    def _load_dir(self, directory: Path, parse) -> list:
        out = []
        for path in sorted(directory.glob("*.json")):
            try:
                with open(path, encoding="utf-8") as fh:
                    out.append(parse(json.load(fh)))
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                log.warning("skipping corrupt document %s: %s", path, exc)
        return out

    def load_all(self) -> tuple[dict[str, ComposerSession], list[Post]]:
        sessions = {
            s.id: s for s in self._load_dir(self.sessions_dir, session_from_dict)
        }
        posts = self._load_dir(self.posts_dir, post_from_dict)
        posts.sort(key=lambda p: p.created_at, reverse=True)
        return sessions, posts
