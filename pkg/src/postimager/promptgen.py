"""Builds weighted keyword tags and the three prompt modes from a draft.

The weight rules: extracted phrases start at 1.0; a single-word tag that
sits in the body's top-5 tf-idf and is a noun or adjective starts at 1.1;
the detected-emotion keyword and the title keyword start at 1.3. Keyword
prompts pass through the negative filter before serialization.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from . import lexicons
from .emotion import EmotionLabel, LexiconBackend, classify
from .lexicons import NegativeWordList, SynonymTable
from .textkit import PosClass, TfidfIndex, pos_class, rake_extract, tfidf_top_k_tokens, tokenize

WEIGHT_MIN = 0.1
WEIGHT_MAX = 2.0
WEIGHT_STEP = 0.1
WEIGHT_DEFAULT = 1.0
WEIGHT_TOP_TFIDF = 1.1
WEIGHT_EMPHASIS = 1.3  # emotion and title keywords
TFIDF_TOP_K = 5


class TagOrigin(str, Enum):
    EXTRACTED = "extracted"
    TOP_TFIDF = "top_tfidf"
    EMOTION = "emotion"
    TITLE = "title"
    USER_ADDED = "user_added"


class PromptMode(str, Enum):
    CONTENT_BASED = "content_based"
    KEYWORD_BASED = "keyword_based"
    EMO_KEYWORD_BASED = "emo_keyword_based"


KEYWORD_MODES = (PromptMode.KEYWORD_BASED, PromptMode.EMO_KEYWORD_BASED)


class EmptyDraftError(ValueError):
    """The draft body is empty where a body is required."""


class EmptyPromptError(ValueError):
    """No usable prompt terms remain (possibly all filtered out)."""

    def __init__(self, message: str, excluded: tuple[str, ...] = ()):
        super().__init__(message)
        self.excluded = excluded


@dataclass(frozen=True)
class PostDraft:
    title: str = ""
    body: str = ""


def _quantize(weight: float) -> float:
    return round(weight * 10.0) / 10.0


@dataclass(frozen=True)
class KeywordTag:
    text: str
    weight: float
    origin: TagOrigin

    def __post_init__(self) -> None:
        if not self.text.strip():
            raise ValueError("tag text must be non-empty")
        if not (WEIGHT_MIN - 1e-9 <= self.weight <= WEIGHT_MAX + 1e-9):
            raise ValueError(f"weight out of range: {self.weight}")
        if abs(self.weight * 10.0 - round(self.weight * 10.0)) > 1e-9:
            raise ValueError(f"weight must be a multiple of 0.1: {self.weight}")


class BumpDirection(str, Enum):
    UP = "up"
    DOWN = "down"


def bump_weight(tag: KeywordTag, direction: BumpDirection) -> KeywordTag:
    """Step the weight by 0.1, clamped to [0.1, 2.0]."""
    delta = WEIGHT_STEP if direction == BumpDirection.UP else -WEIGHT_STEP
    weight = _quantize(min(WEIGHT_MAX, max(WEIGHT_MIN, tag.weight + delta)))
    return replace(tag, weight=weight)


@dataclass(frozen=True)
class PromptSpec:
    mode: PromptMode
    content: str = ""
    tags: tuple[KeywordTag, ...] = ()
    excluded: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.mode == PromptMode.CONTENT_BASED and self.tags:
            raise ValueError("content-based prompts carry no tags")
        if self.mode in KEYWORD_MODES and self.content:
            raise ValueError("keyword prompts carry no raw content")


def _normalize_phrase(
    words: tuple[str, ...],
    pronouns: frozenset[str],
    synonyms: SynonymTable,
) -> str:
    kept = lexicons.strip_pronouns_aux(list(words), pronouns)
    return " ".join(synonyms.normalize(w) for w in kept)


def extract_tags(
    draft: PostDraft,
    index: TfidfIndex,
    stopwords: frozenset[str] | None = None,
    synonyms: SynonymTable | None = None,
    pronouns: frozenset[str] | None = None,
) -> list[KeywordTag]:
    """Extract weighted keyword tags from the draft body.

    Phrases come from RAKE over the body; pronouns/auxiliaries are stripped
    and synonyms normalized before deduplication (first occurrence wins).
    """
    if not draft.body.strip():
        raise EmptyDraftError("draft body is empty")
    synonyms = synonyms or lexicons.default_synonyms()
    pronouns = pronouns or lexicons.default_pronouns_aux()

    body_words = [t.surface for t in tokenize(draft.body)]
    top5 = set(tfidf_top_k_tokens(index, body_words, TFIDF_TOP_K))

    tags: list[KeywordTag] = []
    seen: set[str] = set()
    for phrase in rake_extract(draft.body, stopwords):
        text = _normalize_phrase(phrase.words, pronouns, synonyms)
        if not text or text in seen:
            continue
        seen.add(text)
        is_single = " " not in text
        if is_single and text in top5 and pos_class(text) in (PosClass.NOUN, PosClass.ADJECTIVE):
            tags.append(KeywordTag(text, WEIGHT_TOP_TFIDF, TagOrigin.TOP_TFIDF))
        else:
            tags.append(KeywordTag(text, WEIGHT_DEFAULT, TagOrigin.EXTRACTED))
    return tags


def emotion_tag(body: str, backend=None) -> KeywordTag | None:
    """Detected-emotion keyword at weight 1.3; nothing when neutral."""
    label = classify(body, backend or LexiconBackend())
    if label == EmotionLabel.NEUTRAL:
        return None
    return KeywordTag(label.value, WEIGHT_EMPHASIS, TagOrigin.EMOTION)


def title_tag(
    title: str,
    stopwords: frozenset[str] | None = None,
    synonyms: SynonymTable | None = None,
    pronouns: frozenset[str] | None = None,
) -> KeywordTag | None:
    """Highest-scoring title phrase at weight 1.3; None if nothing usable."""
    if not title.strip():
        return None
    phrases = rake_extract(title, stopwords)
    if not phrases:
        return None
    synonyms = synonyms or lexicons.default_synonyms()
    pronouns = pronouns or lexicons.default_pronouns_aux()
    text = _normalize_phrase(phrases[0].words, pronouns, synonyms)
    if not text:
        return None
    return KeywordTag(text, WEIGHT_EMPHASIS, TagOrigin.TITLE)


def merge_tags(
    tags: list[KeywordTag], extras: list[KeywordTag]
) -> list[KeywordTag]:
    """Append extras, deduplicating by text; the higher weight wins."""
    merged: dict[str, KeywordTag] = {}
    for tag in list(tags) + list(extras):
        current = merged.get(tag.text)
        if current is None:
            merged[tag.text] = tag
        elif tag.weight > current.weight:
            merged[tag.text] = replace(current, weight=tag.weight, origin=tag.origin)
    return list(merged.values())


def build_prompt(
    mode: PromptMode,
    draft: PostDraft,
    tags: list[KeywordTag] | None = None,
    emotion_backend=None,
    negative: NegativeWordList | None = None,
    stopwords: frozenset[str] | None = None,
) -> PromptSpec:
    """Assemble a PromptSpec for the given mode.

    Content-based prompts carry the body verbatim and bypass the filter.
    Keyword modes filter the negative list into ``excluded``; an empty
    surviving tag list is an error.
    """
    if mode == PromptMode.CONTENT_BASED:
        return PromptSpec(mode=mode, content=draft.body)

    all_tags = list(tags or [])
    if mode == PromptMode.EMO_KEYWORD_BASED:
        extras = []
        etag = emotion_tag(draft.body, emotion_backend)
        if etag is not None:
            extras.append(etag)
        ttag = title_tag(draft.title, stopwords)
        if ttag is not None:
            extras.append(ttag)
        all_tags = merge_tags(all_tags, extras)

    if not all_tags:
        raise EmptyPromptError("no keyword tags to build a prompt from")

    negative = negative or lexicons.default_negative_list()
    kept_texts, excluded = negative.filter([t.text for t in all_tags])
    kept_set = set(kept_texts)
    kept_tags = tuple(t for t in all_tags if t.text in kept_set)
    if not kept_tags:
        raise EmptyPromptError(
            "every keyword tag was excluded by the negative filter",
            excluded=tuple(excluded),
        )
    return PromptSpec(mode=mode, tags=kept_tags, excluded=tuple(excluded))


def serialize(spec: PromptSpec) -> str:
    """Single-line prompt for the generation backend.

    Keyword modes render ``(term:weight)`` items joined by ", " with the
    weight printed to exactly one decimal; content mode is the raw content.
    """
    if spec.mode == PromptMode.CONTENT_BASED:
        return spec.content
    return ", ".join(f"({t.text}:{t.weight:.1f})" for t in spec.tags)
