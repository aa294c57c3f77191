from collections import Counter

import pytest

from postimager.evalkit.lda import (
    EmptyCorpusError,
    lda_fit,
    lda_perplexity,
    lda_select_k,
)


def two_vocab_corpus(n_docs=40, reps=10, vocab=30):
    """Two disjoint vocabularies, deterministic uniform word counts.

    Rotation varies word order between documents without touching the
    per-document frequency profile.
    """
    a = [f"aw{i:02d}" for i in range(vocab)]
    b = [f"bw{i:02d}" for i in range(vocab)]
    docs, groups = [], []
    for d in range(n_docs):
        pool = a if d % 2 == 0 else b
        rot = pool[d % vocab:] + pool[:d % vocab]
        docs.append(rot * reps)
        groups.append(d % 2)
    return docs, groups


def cluster_purity(model, groups) -> float:
    """Fraction of docs that sit on their group's majority topic with
    at least 0.9 of their topic mass."""
    dominant = [
        max(range(model.k), key=lambda t: model.theta[d][t])
        for d in range(len(groups))
    ]
    majority = {}
    for g in set(groups):
        votes = Counter(dominant[d] for d in range(len(groups)) if groups[d] == g)
        majority[g] = votes.most_common(1)[0][0]
    ok = sum(
        1
        for d, g in enumerate(groups)
        if dominant[d] == majority[g] and model.theta[d][majority[g]] >= 0.9
    )
    return ok / len(groups)


def test_k1_theta_is_one_and_phi_is_unigram():
    docs = [["x", "y", "x"], ["y", "z"]]
    model = lda_fit(docs, 1, sweeps=3, seed=0)
    assert all(row == [1.0] for row in model.theta)
    # smoothed unigram: (count + beta) / (total + V*beta)
    counts = Counter(w for doc in docs for w in doc)
    total = sum(counts.values())
    v = len(model.vocab)
    for w, word in enumerate(model.vocab):
        expected = (counts[word] + model.beta) / (total + v * model.beta)
        assert model.phi[0][w] == pytest.approx(expected, abs=1e-12)


def test_default_priors():
    model = lda_fit([["a", "b"]], 4, sweeps=1, seed=0)
    assert model.alpha == pytest.approx(50.0 / 4)
    assert model.beta == pytest.approx(0.01)


def test_rows_normalized_after_every_sweep():
    docs, _ = two_vocab_corpus(n_docs=10, reps=2, vocab=8)
    checked = []

    def check(sweep, phi, theta):
        for row in phi:
            assert abs(sum(row) - 1.0) <= 1e-9
            assert all(p >= 0 for p in row)
        for row in theta:
            assert abs(sum(row) - 1.0) <= 1e-9
            assert all(p >= 0 for p in row)
        checked.append(sweep)

    lda_fit(docs, 3, sweeps=5, seed=1, sweep_callback=check)
    assert checked == [0, 1, 2, 3, 4]


def test_token_count_conserved():
    docs, _ = two_vocab_corpus(n_docs=8, reps=3, vocab=10)
    model = lda_fit(docs, 3, sweeps=4, seed=2)
    total_tokens = sum(len(d) for d in docs)
    # recover integer counts from theta: n_dk = theta*(n_d + K*alpha) - alpha
    recovered = 0.0
    for d, doc in enumerate(docs):
        n_d = len(doc)
        for t in range(model.k):
            n_dk = model.theta[d][t] * (n_d + model.k * model.alpha) - model.alpha
            assert n_dk == pytest.approx(round(n_dk), abs=1e-6)
            assert n_dk >= -1e-6
            recovered += n_dk
    assert recovered == pytest.approx(total_tokens, abs=1e-6)


def test_two_vocab_purity_across_five_seeds():
    docs, groups = two_vocab_corpus()
    for seed in range(5):
        model = lda_fit(docs, 2, sweeps=30, seed=seed)
        assert cluster_purity(model, groups) >= 0.9, f"seed {seed}"


def test_select_k_prefers_two_topics_on_two_vocab_corpus():
    docs, _ = two_vocab_corpus()
    for seed in range(5):
        best_k, per_k = lda_select_k(docs, range(2, 5), sweeps=20, seed=seed)
        assert best_k == 2, (seed, per_k)
        assert best_k == min(per_k, key=lambda k: (per_k[k], k))


def test_select_k_returns_argmin_of_reported_perplexities():
    docs, _ = two_vocab_corpus(n_docs=8, reps=2, vocab=6)
    best_k, per_k = lda_select_k(docs, range(1, 4), sweeps=5, seed=3)
    assert set(per_k) == {1, 2, 3}
    assert per_k[best_k] == min(per_k.values())


def test_deterministic_given_seed():
    docs, _ = two_vocab_corpus(n_docs=6, reps=2, vocab=5)
    a = lda_fit(docs, 2, sweeps=10, seed=42)
    b = lda_fit(docs, 2, sweeps=10, seed=42)
    assert a.phi == b.phi and a.theta == b.theta


def test_perplexity_positive_and_bounded_by_vocab():
    docs, _ = two_vocab_corpus(n_docs=6, reps=2, vocab=5)
    model = lda_fit(docs, 2, sweeps=10, seed=0)
    perplexity = lda_perplexity(model, docs)
    assert 1.0 < perplexity
    # perplexity can never exceed the vocabulary size by much more than
    # the smoothing allows
    assert perplexity < len(model.vocab) * 1.1


def test_empty_corpus_raises():
    with pytest.raises(EmptyCorpusError):
        lda_fit([], 2)
    with pytest.raises(EmptyCorpusError):
        lda_fit([[], []], 2)


def test_bad_parameters():
    with pytest.raises(ValueError):
        lda_fit([["a"]], 0)
    with pytest.raises(ValueError):
        lda_fit([["a"]], 1, sweeps=0)
    with pytest.raises(ValueError):
        lda_select_k([["a"]], range(2, 2))


def test_top_words_ranked_by_mass():
    docs = [["alpha"] * 10 + ["beta"] * 5 + ["gamma"]]
    model = lda_fit(docs, 1, sweeps=2, seed=0)
    assert model.top_words(0, 2) == ["alpha", "beta"]
