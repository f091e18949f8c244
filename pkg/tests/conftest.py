import random

import pytest

from sinassist.forge import ForgeConfig, forge_corpus

CONSONANTS = "කගචජටඩතදනපබමයරලවසහ"
CONFUSABLE = "ගකනණලළශෂසතථදධබභ"
VOWEL_SIGNS = ["", "", "ා", "ැ", "ි", "ී", "ු", "ෙ", "ො"]


def make_sentence(rng: random.Random) -> str:
    """A synthetic Sinhala sentence with sites for every error class."""
    words = []
    for _ in range(rng.randint(2, 5)):
        clusters = []
        for _ in range(rng.randint(2, 5)):
            clusters.append(rng.choice(CONSONANTS) + rng.choice(VOWEL_SIGNS))
        if rng.random() < 0.3:
            clusters.append(rng.choice(CONSONANTS) + "්")  # word-final al-lakuna
        words.append("".join(clusters))
    # guarantee at least one confusion-table site
    words[rng.randrange(len(words))] += rng.choice(CONFUSABLE)
    return " ".join(words)


def make_clean_sentences(count: int, seed: int = 7, with_audio: bool = False):
    rng = random.Random(seed)
    rows = []
    for i in range(count):
        audio = f"audio/utt{i:05d}.wav" if with_audio else None
        rows.append((f"utt{i:05d}", make_sentence(rng), audio))
    return rows


@pytest.fixture(scope="session")
def clean_sentences():
    return make_clean_sentences(1200)


@pytest.fixture(scope="session")
def small_corpus(clean_sentences):
    return forge_corpus(clean_sentences[:80], ForgeConfig(per_class_count=20, seed=11))
