"""Seven-class emotion detection over post bodies.

Two interchangeable backends: an offline lexicon classifier (the default)
and a remote-inference client speaking JSON over HTTP. The remote wire
contract is ``POST {"text": ...}`` answered by ``{"label": ..., "scores":
{...}}``; the server may truncate very long texts.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import requests

from .errors import BackendUnavailableError, ProtocolError
from .lexicons import EmotionLexicon, default_emotion_lexicon
from .textkit import tokenize


class EmotionLabel(str, Enum):
    ANGER = "anger"
    DISGUST = "disgust"
    FEAR = "fear"
    JOY = "joy"
    NEUTRAL = "neutral"
    SADNESS = "sadness"
    SURPRISE = "surprise"


@dataclass(frozen=True)
class EmotionBackendConfig:
    kind: str = "lexicon"  # "lexicon" | "remote"
    endpoint: str = ""
    timeout_ms: int = 5000

    def __post_init__(self) -> None:
        if self.kind not in ("lexicon", "remote"):
            raise ValueError(f"unknown emotion backend kind: {self.kind}")
        if self.kind == "remote" and not self.endpoint:
            raise ValueError("remote emotion backend requires an endpoint")


class LexiconBackend:
    """Counts lexicon hits per emotion and returns the argmax.

    Zero hits or a tied maximum both fall back to neutral, which keeps the
    downstream prompt weighting conservative.
    """

    def __init__(self, lexicon: EmotionLexicon | None = None):
        self._lexicon = lexicon or default_emotion_lexicon()

    def classify(self, text: str) -> EmotionLabel:
        tokens = [t.surface for t in tokenize(text)]
        counts = self._lexicon.hits(tokens)
        best = max(counts.values())
        if best == 0:
            return EmotionLabel.NEUTRAL
        winners = [e for e, c in counts.items() if c == best]
        if len(winners) > 1:
            return EmotionLabel.NEUTRAL
        return EmotionLabel(winners[0])


class RemoteBackend:
    """Client for an external emotion-classification service."""

    def __init__(self, endpoint: str, timeout_ms: int = 5000, session: requests.Session | None = None):
        if not endpoint:
            raise ValueError("remote emotion backend requires an endpoint")
        self.endpoint = endpoint
        self.timeout_ms = timeout_ms
        self._session = session or requests.Session()

    def classify(self, text: str) -> EmotionLabel:
        try:
            response = self._session.post(
                self.endpoint, json={"text": text}, timeout=self.timeout_ms / 1000.0
            )
            response.raise_for_status()
        except requests.RequestException as exc:
            raise BackendUnavailableError(f"emotion backend: {exc}") from exc
        try:
            label = response.json()["label"]
        except (ValueError, KeyError) as exc:
            raise ProtocolError(f"emotion backend returned malformed payload: {exc}") from exc
        try:
            return EmotionLabel(label)
        except ValueError as exc:
            raise ProtocolError(f"emotion backend returned unknown label {label!r}") from exc


def make_backend(config: EmotionBackendConfig):
    if config.kind == "remote":
        return RemoteBackend(config.endpoint, config.timeout_ms)
    return LexiconBackend()


def classify(text: str, backend=None) -> EmotionLabel:
    """Classify text with the given backend (lexicon by default)."""
    if backend is None:
        backend = LexiconBackend()
    return backend.classify(text)
