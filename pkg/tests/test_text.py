import unicodedata

from hypothesis import given
from hypothesis import strategies as st

from sinassist.text import (
    base_consonant,
    is_sinhala_cluster,
    normalize,
    replace_base_consonant,
    segment_clusters,
    tokenize_words,
)

sinhala_chars = st.characters(min_codepoint=0x0D80, max_codepoint=0x0DFF)
mixed_text = st.text(
    alphabet=st.one_of(sinhala_chars, st.characters(max_codepoint=0x2FF)), max_size=40
)


def test_normalize_passthrough():
    assert normalize("ගස") == "ගස"


def test_normalize_whitespace_collapse():
    assert normalize("  ගස  ගම ") == "ගස ගම"
    assert normalize("ගස\t\nගම") == "ගස ගම"


def test_normalize_composes_decomposed_vowel_signs():
    # NFD oracle: decompose, then normalize must equal NFC of the original
    for composed in ["කො", "කෝ", "ගේ"]:
        decomposed = unicodedata.normalize("NFD", composed)
        assert decomposed != composed
        assert normalize(decomposed) == unicodedata.normalize("NFC", composed)


def test_segment_paper_units():
    assert segment_clusters("ගම") == ["ග", "ම"]
    assert segment_clusters("ගසක්") == ["ග", "ස", "ක්"]


def test_segment_empty():
    assert segment_clusters("") == []


def test_segment_keeps_vowel_signs_attached():
    assert segment_clusters("කොළඹ") == ["කො", "ළ", "ඹ"]


def test_segment_zwj_conjunct_is_one_cluster():
    # ශ + ් + ZWJ + ර + ී ("shri") must not split at the ZWJ
    shri = "ශ්‍රී"
    assert segment_clusters(shri) == [shri]


def test_tokenize_words():
    text = tokenize_words("ගස ගම")
    assert [list(w) for w in text.words] == [["ග", "ස"], ["ග", "ම"]]


def test_tokenize_empty():
    assert tokenize_words("").words == ()


def test_tokenize_round_trip_single_word():
    assert tokenize_words("ගසක්").raw == "ගසක්"


def test_base_consonant_helpers():
    assert base_consonant("ගො") == "ග"
    assert base_consonant("ා") is None
    assert replace_base_consonant("ගො", "ක") == "කො"
    assert is_sinhala_cluster("ග")
    assert not is_sinhala_cluster("a")


@given(mixed_text)
def test_round_trip_identity(s):
    text = tokenize_words(s)
    assert " ".join("".join(w) for w in text.words) == normalize(s)


@given(mixed_text)
def test_normalize_idempotent(s):
    assert normalize(normalize(s)) == normalize(s)


@given(mixed_text)
def test_cluster_codepoints_preserved(s):
    for word in normalize(s).split(" "):
        clusters = segment_clusters(word)
        assert "".join(clusters) == word
        assert sum(len(c) for c in clusters) == len(word)


@given(mixed_text)
def test_cluster_stability(s):
    for word in tokenize_words(s).words:
        for cluster in word:
            assert cluster
            assert segment_clusters(cluster) == [cluster]
