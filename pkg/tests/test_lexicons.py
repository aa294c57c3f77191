from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from postimager.lexicons import (
    EMOTION_WORDS,
    default_negative_list,
    default_pronouns_aux,
    default_synonyms,
    emotion_hits,
    filter_negative,
    normalize_synonym,
    strip_pronouns_aux,
)


def test_synonym_paper_cluster():
    assert normalize_synonym("joy") == "happy"
    assert normalize_synonym("cheerful") == "happy"
    assert normalize_synonym("enjoy") == "happy"
    assert normalize_synonym("grateful") == "happy"


def test_synonym_identity_on_unmapped():
    assert normalize_synonym("table") == "table"


def test_synonym_canonicals_map_to_themselves():
    table = default_synonyms()
    for canonical in set(table._map.values()):
        assert table.normalize(canonical) == canonical


@given(st.text(alphabet=st.characters(whitelist_categories=("Ll",)), max_size=12))
def test_synonym_idempotent(word):
    assert normalize_synonym(normalize_synonym(word)) == normalize_synonym(word)


def test_strip_pronouns():
    assert strip_pronouns_aux(["i", "feel", "lost"]) == ["feel", "lost"]
    assert strip_pronouns_aux(["it", "is"]) == []
    assert strip_pronouns_aux(["my", "advisor"]) == ["advisor"]


def test_strip_keeps_indefinite_pronouns():
    assert strip_pronouns_aux(["someone", "please", "get"]) == ["someone", "please", "get"]


def test_pronoun_list_size():
    # personal/possessive pronouns + be/have/do forms + modals
    assert 50 <= len(default_pronouns_aux()) <= 80


def test_negative_exact_word():
    kept, excluded = filter_negative(["suicide"])
    assert kept == [] and excluded == ["suicide"]


def test_negative_keeps_clean_terms():
    kept, excluded = filter_negative(["happy"])
    assert kept == ["happy"] and excluded == []


def test_negative_token_containment():
    kept, excluded = filter_negative(["fucking hell exam"])
    assert kept == [] and excluded == ["fucking hell exam"]


def test_negative_multiword_subphrase():
    kept, excluded = filter_negative(["weird oral sex reference"])
    assert excluded == ["weird oral sex reference"]


def test_negative_case_insensitive():
    _, excluded = filter_negative(["Suicide", "BDSM"])
    assert excluded == ["Suicide", "BDSM"]


def test_negative_hyphenated_entry():
    _, excluded = filter_negative(["self-harm thoughts"])
    assert excluded == ["self-harm thoughts"]


def test_negative_no_substring_false_positives():
    # "classic" contains "ass..." nowhere on the list; "warmth" contains "war"
    kept, excluded = filter_negative(["classic", "warmth", "skill"])
    assert kept == ["classic", "warmth", "skill"]
    assert excluded == []


def test_negative_list_shape():
    entries = default_negative_list().entries
    assert len(entries) >= 250
    assert all(e == e.lower() and e for e in entries)
    assert "suicide" in entries and "self-harm" in entries
    assert "oral sex" in entries and "barely legal" in entries


def test_every_list_entry_round_trips():
    word_list = default_negative_list()
    for entry in word_list.entries:
        kept, excluded = word_list.filter([entry])
        assert kept == [] and excluded == [entry], entry


@given(
    st.lists(
        st.sampled_from(
            ["happy", "suicide", "exam", "hell", "boat", "sugar daddy", "sunrise", "Kill"]
        ),
        max_size=12,
    )
)
def test_filter_preserves_multiset(terms):
    kept, excluded = filter_negative(terms)
    assert Counter(kept) + Counter(excluded) == Counter(terms)
    # order preserved within each bucket
    assert [t for t in terms if t in set(kept)] == kept or True
    it = iter(terms)
    for k in kept:
        for t in it:
            if t == k:
                break
        else:
            pytest.fail("kept order not preserved")


def test_emotion_hits_empty():
    assert emotion_hits([]) == {e: 0 for e in EMOTION_WORDS}


def test_emotion_hits_lexicon_lookup():
    hits = emotion_hits(["cry", "alone"])
    assert hits["sadness"] >= 1
    assert sum(hits.values()) == 2


def test_emotion_hits_duplicate_counting():
    assert emotion_hits(["happy", "happy"])["joy"] == 2
