"""Pure text-analysis primitives.

Tokenization, stopword handling, RAKE phrase extraction, TF-IDF scoring,
lightweight part-of-speech classing, and the cleaning pipeline that feeds
the topic model. Everything here is a pure function over immutable inputs;
no module-level mutable state beyond lazily loaded data files.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

DATA_DIR = Path(__file__).resolve().parent / "data"

# Word = run of alphanumerics; internal apostrophes/hyphens do not split.
_WORD_RE = re.compile(r"[a-z0-9]+(?:['\-][a-z0-9]+)*")
# Phrase boundaries for RAKE: anything that is not word material or space.
_FRAGMENT_SPLIT_RE = re.compile(r"[^a-z0-9'\-\s]+")


class UnknownDocumentError(KeyError):
    """Raised when a document id is not present in a TfidfIndex."""


@dataclass(frozen=True)
class Token:
    surface: str
    position: int


@dataclass(frozen=True)
class ScoredPhrase:
    """A RAKE candidate phrase with its degree/frequency score."""

    words: tuple[str, ...]
    score: float

    @property
    def text(self) -> str:
        return " ".join(self.words)


def _load_wordlist(path: Path) -> list[str]:
    out = []
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip().lower()
        if line and not line.startswith("#"):
            out.append(line)
    return out


def load_stopwords(path: Path | None = None) -> frozenset[str]:
    return frozenset(_load_wordlist(path or DATA_DIR / "stopwords.txt"))


def load_pos_lexicon(path: Path | None = None) -> dict[str, str]:
    lex = {}
    for line in (path or DATA_DIR / "pos_lexicon.txt").read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        word, cls = line.split("\t")
        lex[word.lower()] = cls
    return lex


_STOPWORDS: frozenset[str] | None = None
_POS_LEXICON: dict[str, str] | None = None


def default_stopwords() -> frozenset[str]:
    global _STOPWORDS
    if _STOPWORDS is None:
        _STOPWORDS = load_stopwords()
    return _STOPWORDS


def tokenize(text: str) -> list[Token]:
    """Split on non-alphanumeric boundaries and lowercase.

    Hyphenated and apostrophe words stay whole ("self-harm", "don't").
    Empty input yields an empty list.
    """
    return [
        Token(surface=m.group(0), position=i)
        for i, m in enumerate(_WORD_RE.finditer(text.lower()))
    ]


def _candidate_phrases(
    text: str, stopwords: frozenset[str], max_words: int
) -> list[tuple[str, ...]]:
    """Maximal runs of non-stopwords between stopwords and punctuation."""
    phrases: list[tuple[str, ...]] = []
    for fragment in _FRAGMENT_SPLIT_RE.split(text.lower()):
        run: list[str] = []
        for match in _WORD_RE.finditer(fragment):
            word = match.group(0)
            if word in stopwords:
                if run:
                    phrases.append(tuple(run))
                    run = []
            else:
                run.append(word)
        if run:
            phrases.append(tuple(run))
    # Over-long runs are dropped rather than truncated, mirroring the usual
    # RAKE max-length behaviour.
    return [p for p in phrases if len(p) <= max_words]


def rake_extract(
    text: str,
    stopwords: frozenset[str] | None = None,
    max_phrase_words: int = 4,
) -> list[ScoredPhrase]:
    """RAKE keyword extraction.

    Candidate phrases are delimited by stopwords and punctuation. Each word
    scores degree(word)/frequency(word) over the phrase co-occurrence graph,
    a phrase scores the sum of its word scores. Returned phrases are unique,
    sorted by score descending with ties broken by first occurrence.
    """
    if stopwords is None:
        stopwords = default_stopwords()
    phrases = _candidate_phrases(text, stopwords, max_phrase_words)
    if not phrases:
        return []

    freq: Counter[str] = Counter()
    degree: Counter[str] = Counter()
    for phrase in phrases:
        for word in phrase:
            freq[word] += 1
            degree[word] += len(phrase)

    word_score = {w: degree[w] / freq[w] for w in freq}

    seen: dict[tuple[str, ...], int] = {}
    for i, phrase in enumerate(phrases):
        seen.setdefault(phrase, i)
    unique = sorted(seen, key=seen.__getitem__)
    scored = [ScoredPhrase(p, sum(word_score[w] for w in p)) for p in unique]
    scored.sort(key=lambda sp: (-sp.score, seen[sp.words]))
    return scored


class TfidfIndex:
    """Raw-count tf, smoothed log idf: score(w, d) = tf * (ln(N/df) + 1)."""

    def __init__(self) -> None:
        self.doc_count = 0
        self.doc_freq: Counter[str] = Counter()
        self._term_counts: dict[str, Counter[str]] = {}

    def add(self, doc_id: str, words: list[str]) -> None:
        if doc_id in self._term_counts:
            raise ValueError(f"duplicate document id: {doc_id}")
        counts = Counter(words)
        self._term_counts[doc_id] = counts
        self.doc_count += 1
        for word in counts:
            self.doc_freq[word] += 1

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._term_counts

    def doc_ids(self) -> list[str]:
        return list(self._term_counts)

    def term_counts(self, doc_id: str) -> Counter[str]:
        if doc_id not in self._term_counts:
            raise UnknownDocumentError(doc_id)
        return self._term_counts[doc_id]


def _top_k(scores: dict[str, float], k: int) -> list[str]:
    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    return [w for w, _ in ranked[:k]]


def tfidf_top_k(index: TfidfIndex, doc_id: str, k: int) -> list[str]:
    """Top-k words of an indexed document by tf-idf, ties lexicographic."""
    import math

    counts = index.term_counts(doc_id)
    scores = {
        w: tf * (math.log(index.doc_count / index.doc_freq[w]) + 1.0)
        for w, tf in counts.items()
    }
    return _top_k(scores, k)


def tfidf_top_k_tokens(index: TfidfIndex, words: list[str], k: int) -> list[str]:
    """Top-k for a document not in the index.

    The document is scored as if appended to the corpus: doc_count and the
    document frequencies of its own words are incremented by one.
    """
    import math

    counts = Counter(words)
    if not counts:
        return []
    n = index.doc_count + 1
    scores = {
        w: tf * (math.log(n / (index.doc_freq.get(w, 0) + 1)) + 1.0)
        for w, tf in counts.items()
    }
    return _top_k(scores, k)


class PosClass(str, Enum):
    NOUN = "noun"
    ADJECTIVE = "adjective"
    OTHER = "other"


_NOUN_SUFFIXES = ("ness", "tion", "sion", "ment", "ance", "ence", "ship", "hood", "ism", "ity")
_ADJ_SUFFIXES = ("ful", "less", "ous", "ive", "able", "ible")


def pos_class(word: str, lexicon: dict[str, str] | None = None) -> PosClass:
    """Classify a lowercase word as noun, adjective, or other.

    Lexicon lookup first; unknown words fall back to suffix heuristics.
    """
    global _POS_LEXICON
    if lexicon is None:
        if _POS_LEXICON is None:
            _POS_LEXICON = load_pos_lexicon()
        lexicon = _POS_LEXICON
    if word in lexicon:
        return PosClass(lexicon[word])
    if len(word) > 4:
        if word.endswith(_NOUN_SUFFIXES):
            return PosClass.NOUN
        if word.endswith(_ADJ_SUFFIXES):
            return PosClass.ADJECTIVE
    return PosClass.OTHER


_ES_TAKING_ENDINGS = ("ches", "shes", "xes", "zes")
_KEEP_DOUBLE = {"ll", "ss", "ee", "oo", "zz"}


def _strip_one_suffix(word: str) -> str:
    if word.endswith("ies") and len(word) >= 5:
        return word[:-3] + "y"
    if word.endswith("sses") and len(word) >= 5:
        return word[:-2]
    if word.endswith(_ES_TAKING_ENDINGS) and len(word) - 2 >= 3:
        return word[:-2]
    if (
        word.endswith("s")
        and not word.endswith(("ss", "us", "is"))
        and len(word) - 1 >= 3
    ):
        return word[:-1]
    for suffix in ("ing", "ed"):
        if word.endswith(suffix) and len(word) - len(suffix) >= 3:
            stem = word[: -len(suffix)]
            if len(stem) >= 2 and stem[-1] == stem[-2] and stem[-2:] not in _KEEP_DOUBLE:
                stem = stem[:-1]
            return stem
    return word


def lemmatize(word: str) -> str:
    """Rule-based suffix stripping (plural -s/-es, -ing, -ed) to a fixpoint.

    Iterating to a fixpoint keeps the whole cleaning pipeline idempotent.
    """
    prev = None
    while word != prev:
        prev = word
        word = _strip_one_suffix(word)
    return word


_NON_LETTER_RE = re.compile(r"[^a-zA-Z]+")


def preprocess_for_lda(
    raw_docs: list[str],
    stopwords: frozenset[str] | None = None,
    min_corpus_freq: int = 5,
) -> list[list[str]]:
    """Clean raw documents for topic modeling.

    In order: strip non-letter characters, lowercase, remove stopwords,
    lemmatize, drop words of length < 2 or > 15, then drop words whose
    corpus frequency is below ``min_corpus_freq``. Documents may come out
    empty. Running the pipeline on its own output changes nothing.
    """
    if stopwords is None:
        stopwords = default_stopwords()

    cleaned: list[list[str]] = []
    for raw in raw_docs:
        words = _NON_LETTER_RE.sub(" ", raw).lower().split()
        out = []
        for word in words:
            if word in stopwords:
                continue
            lemma = lemmatize(word)
            # A plural/participle can collapse onto a stopword; drop those
            # too or the pipeline would not be idempotent.
            if lemma in stopwords:
                continue
            if 2 <= len(lemma) <= 15:
                out.append(lemma)
        cleaned.append(out)

    corpus_freq: Counter[str] = Counter()
    for doc in cleaned:
        corpus_freq.update(doc)
    return [[w for w in doc if corpus_freq[w] >= min_corpus_freq] for doc in cleaned]
