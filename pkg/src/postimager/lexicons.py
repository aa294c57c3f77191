"""Curated word resources.

Synonym normalization, pronoun/auxiliary stripping, the extremely-negative
exclusion list, and the fallback emotion lexicon. All four are line-oriented
UTF-8 data files loaded once and treated as immutable afterwards; file paths
can be overridden for testing or deployment.
"""

from __future__ import annotations

from pathlib import Path

from .textkit import DATA_DIR, tokenize

EMOTION_WORDS = ("anger", "disgust", "fear", "joy", "sadness", "surprise")


def _data_lines(path: Path) -> list[str]:
    out = []
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(line.lower())
    return out


class SynonymTable:
    """word -> canonical word; canonical words map to themselves."""

    def __init__(self, mapping: dict[str, str]):
        self._map = dict(mapping)
        for canonical in list(self._map.values()):
            self._map.setdefault(canonical, canonical)

    @classmethod
    def load(cls, path: Path | None = None) -> "SynonymTable":
        mapping = {}
        for line in _data_lines(path or DATA_DIR / "synonyms.txt"):
            word, canonical = line.split("\t")
            mapping[word] = canonical
        return cls(mapping)

    def normalize(self, word: str) -> str:
        return self._map.get(word, word)


class NegativeWordList:
    """The exclusion list for image-generation prompts.

    ``entries`` preserves source order with duplicates collapsed. A term is
    excluded when it equals an entry, when any of its tokens equals a
    single-word entry, or when it contains a multi-word entry as a
    contiguous sub-phrase; everything is matched case-insensitively.
    """

    def __init__(self, entries: tuple[str, ...]):
        self.entries = entries
        self._entry_set = frozenset(entries)
        self._single = frozenset(e for e in entries if " " not in e)
        phrases = [tuple(e.split()) for e in entries if " " in e]
        self._phrases_by_head: dict[str, list[tuple[str, ...]]] = {}
        for phrase in phrases:
            self._phrases_by_head.setdefault(phrase[0], []).append(phrase)

    @classmethod
    def load(cls, path: Path | None = None) -> "NegativeWordList":
        seen: dict[str, None] = {}
        for entry in _data_lines(path or DATA_DIR / "negative_keywords.txt"):
            seen.setdefault(entry)
        return cls(tuple(seen))

    def is_negative(self, term: str) -> bool:
        lowered = term.strip().lower()
        if lowered in self._entry_set:
            return True
        tokens = [t.surface for t in tokenize(lowered)]
        if any(t in self._single for t in tokens):
            return True
        for i, token in enumerate(tokens):
            for phrase in self._phrases_by_head.get(token, ()):
                if tuple(tokens[i : i + len(phrase)]) == phrase:
                    return True
        return False

    def filter(self, terms: list[str]) -> tuple[list[str], list[str]]:
        kept, excluded = [], []
        for term in terms:
            (excluded if self.is_negative(term) else kept).append(term)
        return kept, excluded


class EmotionLexicon:
    """word -> one of the six non-neutral emotion labels."""

    def __init__(self, mapping: dict[str, str]):
        bad = {e for e in mapping.values() if e not in EMOTION_WORDS}
        if bad:
            raise ValueError(f"unknown emotion labels: {sorted(bad)}")
        self._map = dict(mapping)

    @classmethod
    def load(cls, path: Path | None = None) -> "EmotionLexicon":
        mapping = {}
        for line in _data_lines(path or DATA_DIR / "emotion_lexicon.txt"):
            word, emotion = line.split("\t")
            mapping[word] = emotion
        return cls(mapping)

    def lookup(self, word: str) -> str | None:
        return self._map.get(word)

    def hits(self, tokens: list[str]) -> dict[str, int]:
        counts = {e: 0 for e in EMOTION_WORDS}
        for token in tokens:
            emotion = self._map.get(token)
            if emotion is not None:
                counts[emotion] += 1
        return counts


def load_pronouns_aux(path: Path | None = None) -> frozenset[str]:
    return frozenset(_data_lines(path or DATA_DIR / "pronouns_aux.txt"))


_SYNONYMS: SynonymTable | None = None
_NEGATIVE: NegativeWordList | None = None
_EMOTIONS: EmotionLexicon | None = None
_PRONOUNS: frozenset[str] | None = None


def default_synonyms() -> SynonymTable:
    global _SYNONYMS
    if _SYNONYMS is None:
        _SYNONYMS = SynonymTable.load()
    return _SYNONYMS


def default_negative_list() -> NegativeWordList:
    global _NEGATIVE
    if _NEGATIVE is None:
        _NEGATIVE = NegativeWordList.load()
    return _NEGATIVE


def default_emotion_lexicon() -> EmotionLexicon:
    global _EMOTIONS
    if _EMOTIONS is None:
        _EMOTIONS = EmotionLexicon.load()
    return _EMOTIONS


def default_pronouns_aux() -> frozenset[str]:
    global _PRONOUNS
    if _PRONOUNS is None:
        _PRONOUNS = load_pronouns_aux()
    return _PRONOUNS


def normalize_synonym(word: str, table: SynonymTable | None = None) -> str:
    return (table or default_synonyms()).normalize(word)


def strip_pronouns_aux(
    phrase: list[str], strip_set: frozenset[str] | None = None
) -> list[str]:
    """Remove pronoun/auxiliary tokens from a phrase; may return empty."""
    strip_set = strip_set or default_pronouns_aux()
    return [w for w in phrase if w not in strip_set]


def filter_negative(
    terms: list[str], word_list: NegativeWordList | None = None
) -> tuple[list[str], list[str]]:
    """Split terms into (kept, excluded); order preserved, nothing dropped."""
    return (word_list or default_negative_list()).filter(terms)


def emotion_hits(
    tokens: list[str], lexicon: EmotionLexicon | None = None
) -> dict[str, int]:
    """Count lexicon membership per non-neutral emotion; missing map to 0."""
    return (lexicon or default_emotion_lexicon()).hits(tokens)
