"""Unicode-correct Sinhala text handling.

Normalization, word tokenization, and extended-grapheme-cluster
segmentation. Clusters are the unit every error-injection and diagnosis
operation works on: a base consonant together with its attached vowel
signs, al-lakuna (U+0DCA), and ZWJ conjunct forms is one cluster.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass

import regex

ZWJ = "‍"

_SINHALA_BLOCK = range(0x0D80, 0x0E00)
# Sinhala consonants: KA (U+0D9A) through FAYANNA (U+0DC6)
_SINHALA_CONSONANTS = range(0x0D9A, 0x0DC7)

_CLUSTER_RE = regex.compile(r"\X")


def normalize(text: str) -> str:
    """NFC-normalize and collapse whitespace runs to single spaces."""
    return " ".join(unicodedata.normalize("NFC", text).split())


def segment_clusters(word: str) -> list[str]:
    """Split a word into extended grapheme clusters.

    Default UAX #29 rules break after a ZWJ, which would split Sinhala
    conjuncts (consonant + al-lakuna + ZWJ + consonant) in two; clusters
    ending in ZWJ are therefore merged with their successor.
    """
    raw = _CLUSTER_RE.findall(word)
    clusters: list[str] = []
    for piece in raw:
        if clusters and clusters[-1].endswith(ZWJ):
            clusters[-1] += piece
        else:
            clusters.append(piece)
    return clusters


def is_sinhala_cluster(cluster: str) -> bool:
    return bool(cluster) and ord(cluster[0]) in _SINHALA_BLOCK


def base_consonant(cluster: str) -> str | None:
    """The cluster's leading Sinhala consonant, or None."""
    if cluster and ord(cluster[0]) in _SINHALA_CONSONANTS:
        return cluster[0]
    return None


def replace_base_consonant(cluster: str, consonant: str) -> str:
    """Swap the leading consonant, keeping attached signs intact."""
    return consonant + cluster[1:]


@dataclass(frozen=True)
class SinhalaText:
    """Normalized text as a word sequence of grapheme-cluster sequences.

    Joining the words with single spaces reproduces ``raw``.
    """

    words: tuple[tuple[str, ...], ...]
    raw: str

    def __post_init__(self) -> None:
        rebuilt = " ".join("".join(w) for w in self.words)
        if rebuilt != self.raw:
            raise ValueError(f"words do not reproduce raw: {rebuilt!r} != {self.raw!r}")

    @property
    def word_strings(self) -> list[str]:
        return ["".join(w) for w in self.words]


def tokenize_words(text: str) -> SinhalaText:
    """Normalize, split on whitespace, and segment each word."""
    norm = normalize(text)
    words = tuple(tuple(segment_clusters(w)) for w in norm.split(" ") if w)
    return SinhalaText(words=words, raw=norm)
