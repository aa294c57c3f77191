"""Composer session state machine.

One session per drafted post. Two flows: the original flow generates
straight from the draft, the keyword-first flow inserts an explicit
"detect keywords" stop before any generation. Baseline sessions skip
generation entirely and submit a draft with an optional uploaded image.

Each session is a single-writer entity: mutations are serialized through
a per-session lock, with ``in_flight`` rejecting concurrent generation
instead of queueing it.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field
from enum import Enum

from . import promptgen
from .promptgen import (
    BumpDirection,
    EmptyDraftError,
    KeywordTag,
    PostDraft,
    PromptMode,
    PromptSpec,
    TagOrigin,
    bump_weight,
    emotion_tag,
    extract_tags,
    merge_tags,
    title_tag,
)
from .textkit import TfidfIndex


class Flow(str, Enum):
    STUDY_II = "study_ii"
    STUDY_III = "study_iii"


class SessionState(str, Enum):
    DRAFTING = "drafting"
    KEYWORDS_DETECTED = "keywords_detected"
    IMAGES_SHOWN = "images_shown"
    SUBMITTED = "submitted"


class WrongStateError(RuntimeError):
    """Operation not permitted in the session's current state."""


class BusyError(RuntimeError):
    """A generation round is already in flight for this session."""


class UnknownImageError(KeyError):
    """Referenced image id is not part of this session."""


class TagIndexError(IndexError):
    """Tag index out of range."""


@dataclass(frozen=True)
class ImageRecord:
    id: str
    ref: str  # content-addressed storage key
    seed: int


@dataclass(frozen=True)
class ImageBatch:
    images: tuple[ImageRecord, ...]
    prompt: PromptSpec
    created_at: float

    def __post_init__(self) -> None:
        if len(self.images) != 4:
            raise ValueError("an image batch holds exactly four images")


@dataclass(frozen=True)
class Post:
    id: str
    session_id: str
    title: str
    body: str
    images: tuple[str, ...]  # storage refs, attachment order
    flow: Flow
    created_at: float
    tags: tuple[KeywordTag, ...]


@dataclass
class ComposerSession:
    flow: Flow
    baseline: bool = False
    id: str = field(default_factory=lambda: uuid.uuid4().hex)
    state: SessionState = SessionState.DRAFTING
    draft: PostDraft = field(default_factory=PostDraft)
    tags: list[KeywordTag] = field(default_factory=list)
    history: list[ImageBatch] = field(default_factory=list)  # newest first
    attached: list[str] = field(default_factory=list)  # image ids, in order
    uploaded: list[str] = field(default_factory=list)  # storage refs (baseline)
    in_flight: bool = False
    revision: int = 0
    submitted_post_id: str | None = None
    _image_seq: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    # -- helpers -------------------------------------------------------------

    def _require_state(self, *allowed: SessionState) -> None:
        if self.state not in allowed:
            raise WrongStateError(
                f"operation not allowed in state {self.state.value}"
            )

    def image_ids(self) -> set[str]:
        return {img.id for batch in self.history for img in batch.images}

    def find_image(self, image_id: str) -> ImageRecord:
        for batch in self.history:
            for img in batch.images:
                if img.id == image_id:
                    return img
        raise UnknownImageError(image_id)

    def _detected_tags(self, index: TfidfIndex, emotion_backend=None) -> list[KeywordTag]:
        extracted = extract_tags(self.draft, index)
        extras = []
        etag = emotion_tag(self.draft.body, emotion_backend)
        if etag is not None:
            extras.append(etag)
        ttag = title_tag(self.draft.title)
        if ttag is not None:
            extras.append(ttag)
        return merge_tags(extracted, extras)

    # -- operations ----------------------------------------------------------

    def edit_draft(self, title: str | None = None, body: str | None = None) -> None:
        self._require_state(SessionState.DRAFTING)
        self.draft = PostDraft(
            title=self.draft.title if title is None else title,
            body=self.draft.body if body is None else body,
        )

    def detect_keywords(self, index: TfidfIndex, emotion_backend=None) -> None:
        if self.flow != Flow.STUDY_III:
            raise WrongStateError("keyword detection is a keyword-first-flow step")
        self._require_state(SessionState.DRAFTING)
        if not self.draft.body.strip():
            raise EmptyDraftError("draft body is empty")
        self.tags = self._detected_tags(index, emotion_backend)
        self.state = SessionState.KEYWORDS_DETECTED

    def generate(
        self,
        mode: PromptMode,
        backend,
        index: TfidfIndex,
        image_store,
        emotion_backend=None,
        seed: int | None = None,
        batch_size: int = 4,
    ) -> ImageBatch:
        """Run one generation round and prepend the batch to history.

        The busy flag is set for the duration of the backend call; failures
        clear it and leave the session state untouched.
        """
        if self.baseline:
            raise WrongStateError("baseline sessions do not generate images")
        if mode not in (PromptMode.KEYWORD_BASED, PromptMode.CONTENT_BASED):
            raise ValueError(f"unsupported generation mode: {mode}")

        with self.lock:
            if self.in_flight:
                raise BusyError("a generation round is already in flight")
            if self.flow == Flow.STUDY_III:
                self._require_state(
                    SessionState.KEYWORDS_DETECTED, SessionState.IMAGES_SHOWN
                )
            else:
                self._require_state(SessionState.DRAFTING, SessionState.IMAGES_SHOWN)
            if not self.draft.body.strip():
                raise EmptyDraftError("draft body is empty")
            if (
                self.flow == Flow.STUDY_II
                and mode == PromptMode.KEYWORD_BASED
                and not self.tags
            ):
                # First keyword-based round in the draft-first flow detects
                # keywords implicitly; later rounds reuse the edited tags.
                self.tags = self._detected_tags(index, emotion_backend)
            if mode == PromptMode.KEYWORD_BASED:
                spec = promptgen.build_prompt(mode, self.draft, self.tags)
            else:
                spec = promptgen.build_prompt(mode, self.draft)
            self.in_flight = True

        try:
            from .backends import GenRequest  # local import to avoid a cycle

            result = backend.txt2img(
                GenRequest(
                    prompt=promptgen.serialize(spec),
                    batch_size=batch_size,
                    seed=seed,
                )
            )
            records = []
            with self.lock:
                for image_bytes in result.images:
                    ref = image_store.put(image_bytes)
                    self._image_seq += 1
                    records.append(
                        ImageRecord(
                            id=f"{self.id[:8]}-img-{self._image_seq:04d}",
                            ref=ref,
                            seed=result.seed_used,
                        )
                    )
                batch = ImageBatch(
                    images=tuple(records), prompt=spec, created_at=time.time()
                )
                self.history.insert(0, batch)
                self.state = SessionState.IMAGES_SHOWN
                return batch
        finally:
            with self.lock:
                self.in_flight = False

    def edit_tag(self, i: int, text: str) -> None:
        self._require_state(SessionState.KEYWORDS_DETECTED, SessionState.IMAGES_SHOWN)
        if not 0 <= i < len(self.tags):
            raise TagIndexError(i)
        if not text.strip():
            raise ValueError("tag text must be non-empty")
        old = self.tags[i]
        self.tags[i] = KeywordTag(text.strip(), old.weight, old.origin)

    def add_tag(self, text: str) -> None:
        self._require_state(SessionState.KEYWORDS_DETECTED, SessionState.IMAGES_SHOWN)
        if not text.strip():
            raise ValueError("tag text must be non-empty")
        self.tags.append(KeywordTag(text.strip(), 1.0, TagOrigin.USER_ADDED))

    def remove_tag(self, i: int) -> None:
        self._require_state(SessionState.KEYWORDS_DETECTED, SessionState.IMAGES_SHOWN)
        if not 0 <= i < len(self.tags):
            raise TagIndexError(i)
        del self.tags[i]

    def bump_tag(self, i: int, direction: BumpDirection) -> None:
        self._require_state(SessionState.KEYWORDS_DETECTED, SessionState.IMAGES_SHOWN)
        if not 0 <= i < len(self.tags):
            raise TagIndexError(i)
        self.tags[i] = bump_weight(self.tags[i], direction)

    def back_to_edit(self) -> None:
        if self.flow == Flow.STUDY_III:
            self._require_state(
                SessionState.KEYWORDS_DETECTED, SessionState.IMAGES_SHOWN
            )
        else:
            self._require_state(SessionState.IMAGES_SHOWN)
        self.state = SessionState.DRAFTING

    def attach_image(self, image_id: str) -> None:
        self._require_state(SessionState.IMAGES_SHOWN)
        self.find_image(image_id)
        if image_id not in self.attached:
            self.attached.append(image_id)

    def detach_image(self, image_id: str) -> None:
        self._require_state(SessionState.IMAGES_SHOWN)
        self.find_image(image_id)
        if image_id in self.attached:
            self.attached.remove(image_id)

    def add_upload(self, ref: str) -> None:
        """Record a locally uploaded image (baseline sessions only)."""
        if not self.baseline:
            raise WrongStateError("uploads are a baseline-mode feature")
        self._require_state(SessionState.DRAFTING)
        if ref not in self.uploaded:
            self.uploaded.append(ref)

    def submit(self) -> Post:
        if self.baseline:
            self._require_state(SessionState.DRAFTING)
            image_refs = tuple(self.uploaded)
        else:
            self._require_state(SessionState.IMAGES_SHOWN)
            image_refs = tuple(self.find_image(i).ref for i in self.attached)
        post = Post(
            id=uuid.uuid4().hex,
            session_id=self.id,
            title=self.draft.title,
            body=self.draft.body,
            images=image_refs,
            flow=self.flow,
            created_at=time.time(),
            tags=tuple(self.tags),
        )
        self.state = SessionState.SUBMITTED
        self.submitted_post_id = post.id
        return post
