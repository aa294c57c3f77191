"""A deliberately independent RAKE implementation used as a test oracle.

Written against the textbook description: sentences split on punctuation,
stopwords replaced by phrase separators via regex substitution, and word
degree/frequency scores from a second pass over the candidate list. Kept
separate from the production code path on purpose; only the stoplist is
shared. Apostrophes and hyphens count as word material so "don't" and
"self-harm" behave as single words.
"""

import re
from collections import defaultdict

_MATERIAL = r"[a-z0-9'\-]"


def reference_rake(text, stopwords, max_words=4):
    sentences = re.split(r"[^a-z0-9'\-\s]+", text.lower())
    alternatives = "|".join(
        re.escape(w) for w in sorted(stopwords, key=len, reverse=True)
    )
    stop_pattern = re.compile(
        rf"(?<!{_MATERIAL})(?:{alternatives})(?!{_MATERIAL})"
    )
    candidates = []
    for sentence in sentences:
        for chunk in stop_pattern.sub("|", sentence).split("|"):
            words = chunk.split()
            if words and len(words) <= max_words:
                candidates.append(tuple(words))

    freq = defaultdict(int)
    degree = defaultdict(int)
    for phrase in candidates:
        for word in phrase:
            freq[word] += 1
            degree[word] += len(phrase)

    first_seen = {}
    for pos, phrase in enumerate(candidates):
        first_seen.setdefault(phrase, pos)

    scored = [
        (phrase, sum(degree[w] / freq[w] for w in phrase))
        for phrase in first_seen
    ]
    scored.sort(key=lambda item: (-item[1], first_seen[item[0]]))
    return [(" ".join(phrase), score) for phrase, score in scored]
