"""Topic modeling via collapsed Gibbs sampling with symmetric priors.

Defaults follow the classical choices alpha = 50/K, beta = 0.01, 100
sweeps. Perplexity is computed on the training corpus and drives the
choice of the topic count over a candidate range.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable

SweepCallback = Callable[[int, list[list[float]], list[list[float]]], None]


@dataclass
class LdaModel:
    k: int
    alpha: float
    beta: float
    vocab: list[str]
    phi: list[list[float]]    # K x V, rows sum to 1
    theta: list[list[float]]  # D x K, rows sum to 1
    word_index: dict[str, int] = field(repr=False, default_factory=dict)

    def top_words(self, topic: int, n: int = 8) -> list[str]:
        row = self.phi[topic]
        order = sorted(range(len(row)), key=lambda w: (-row[w], self.vocab[w]))
        return [self.vocab[w] for w in order[:n]]


class EmptyCorpusError(ValueError):
    """No usable tokens remain in the corpus."""


def _distributions(
    n_kw: list[list[int]],
    n_k: list[int],
    n_dk: list[list[int]],
    n_d: list[int],
    alpha: float,
    beta: float,
) -> tuple[list[list[float]], list[list[float]]]:
    v = len(n_kw[0])
    k = len(n_k)
    phi = [
        [(n_kw[t][w] + beta) / (n_k[t] + v * beta) for w in range(v)]
        for t in range(k)
    ]
    theta = [
        [(n_dk[d][t] + alpha) / (n_d[d] + k * alpha) for t in range(k)]
        for d in range(len(n_dk))
    ]
    return phi, theta


def lda_fit(
    docs: list[list[str]],
    k: int,
    sweeps: int = 100,
    seed: int | None = None,
    alpha: float | None = None,
    beta: float = 0.01,
    sweep_callback: SweepCallback | None = None,
) -> LdaModel:
    """Fit an LDA model by collapsed Gibbs sampling.

    ``sweep_callback(sweep, phi, theta)`` runs after every sweep with the
    distributions implied by the current counts; it exists so callers can
    observe normalization invariants without reaching into the sampler.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if sweeps < 1:
        raise ValueError("sweeps must be >= 1")
    vocab = sorted({w for doc in docs for w in doc})
    if not vocab:
        raise EmptyCorpusError("corpus has no tokens after preprocessing")
    if alpha is None:
        alpha = 50.0 / k
    word_index = {w: i for i, w in enumerate(vocab)}
    token_docs = [[word_index[w] for w in doc] for doc in docs]

    rng = random.Random(seed)
    v = len(vocab)
    n_kw = [[0] * v for _ in range(k)]
    n_k = [0] * k
    n_dk = [[0] * k for _ in range(len(docs))]
    n_d = [len(doc) for doc in token_docs]
    assignments: list[list[int]] = []
    for d, doc in enumerate(token_docs):
        z_doc = []
        for w in doc:
            z = rng.randrange(k)
            z_doc.append(z)
            n_kw[z][w] += 1
            n_k[z] += 1
            n_dk[d][z] += 1
        assignments.append(z_doc)

    v_beta = v * beta
    for sweep in range(sweeps):
        for d, doc in enumerate(token_docs):
            z_doc = assignments[d]
            dk = n_dk[d]
            for i, w in enumerate(doc):
                z = z_doc[i]
                n_kw[z][w] -= 1
                n_k[z] -= 1
                dk[z] -= 1

                total = 0.0
                weights = []
                for t in range(k):
                    p = (dk[t] + alpha) * (n_kw[t][w] + beta) / (n_k[t] + v_beta)
                    total += p
                    weights.append(total)
                target = rng.random() * total
                z_new = 0
                while weights[z_new] < target:
                    z_new += 1

                z_doc[i] = z_new
                n_kw[z_new][w] += 1
                n_k[z_new] += 1
                dk[z_new] += 1
        if sweep_callback is not None:
            phi, theta = _distributions(n_kw, n_k, n_dk, n_d, alpha, beta)
            sweep_callback(sweep, phi, theta)

    phi, theta = _distributions(n_kw, n_k, n_dk, n_d, alpha, beta)
    return LdaModel(
        k=k, alpha=alpha, beta=beta, vocab=vocab, phi=phi, theta=theta,
        word_index=word_index,
    )


def lda_perplexity(model: LdaModel, docs: list[list[str]]) -> float:
    """exp(-sum log p(w|d) / total tokens); unknown words are skipped."""
    total_log = 0.0
    total_tokens = 0
    for d, doc in enumerate(docs):
        theta_d = model.theta[d]
        for word in doc:
            w = model.word_index.get(word)
            if w is None:
                continue
            p = sum(theta_d[t] * model.phi[t][w] for t in range(model.k))
            total_log += math.log(p)
            total_tokens += 1
    if total_tokens == 0:
        raise EmptyCorpusError("no scorable tokens")
    return math.exp(-total_log / total_tokens)


def lda_select_k(
    docs: list[list[str]],
    k_range: range,
    sweeps: int = 100,
    seed: int | None = None,
    alpha: float | None = None,
    beta: float = 0.01,
) -> tuple[int, dict[int, float]]:
    """Fit one model per candidate k and return the argmin-perplexity k.

    Fits are independent given the seed, so ties resolve to the smallest k.
    """
    if len(k_range) == 0:
        raise ValueError("empty k range")
    per_k: dict[int, float] = {}
    for k in k_range:
        model = lda_fit(docs, k, sweeps=sweeps, seed=seed, alpha=alpha, beta=beta)
        per_k[k] = lda_perplexity(model, docs)
    best_k = min(per_k, key=lambda k: (per_k[k], k))
    return best_k, per_k
