"""JSON-lines corpus loading (Pushshift-style) and tf-idf index building."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .textkit import DATA_DIR, TfidfIndex, tokenize

DEMO_CORPUS_PATH = DATA_DIR / "demo_corpus.jsonl"


@dataclass(frozen=True)
class CorpusPost:
    id: str
    title: str
    selftext: str
    created_utc: int

    @property
    def full_text(self) -> str:
        return f"{self.title}\n{self.selftext}".strip()


class CorpusFormatError(ValueError):
    """A corpus line is not valid JSON or misses required fields."""


def load_corpus(path: Path | str | None = None) -> list[CorpusPost]:
    path = Path(path) if path else DEMO_CORPUS_PATH
    posts = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                doc = json.loads(line)
                posts.append(
                    CorpusPost(
                        id=str(doc["id"]),
                        title=str(doc.get("title", "")),
                        selftext=str(doc.get("selftext", "")),
                        created_utc=int(doc.get("created_utc", 0)),
                    )
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise CorpusFormatError(f"{path}:{lineno}: {exc}") from exc
    return posts


def build_index(posts: list[CorpusPost]) -> TfidfIndex:
    """Index each post's title+body as one document."""
    index = TfidfIndex()
    for post in posts:
        index.add(post.id, [t.surface for t in tokenize(post.full_text)])
    return index
