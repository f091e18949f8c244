"""Synthetic dyslexic-error corpus construction.

Applies exactly one cluster-level edit per sample (substitution via a
consonant confusion table, insertion as doubling, omission, adjacent
reversal), records an injection trace that replays to the corrupted
text, and provides the stratified train/test split and the
line-delimited corpus file format.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .diagnosis import Diagnosis, ErrorClass, diagnose, verdict_for
from .text import (
    SinhalaText,
    base_consonant,
    is_sinhala_cluster,
    replace_base_consonant,
    tokenize_words,
)


class NoEligibleSite(ValueError):
    """No site in the sentence can realize the requested error class."""


class InsufficientSourceData(ValueError):
    """A class quota cannot be filled from the given clean sentences."""


class EmptyClass(ValueError):
    """A split was requested over a corpus with an empty error class."""


class CorpusFormatError(ValueError):
    def __init__(self, line_no: int, detail: str):
        super().__init__(f"line {line_no}: {detail}")
        self.line_no = line_no
        self.detail = detail


# Only the ග<->ක pair is attested in the source material; the rest are
# common Sinhala look-alike / sound-alike confusions shipped as
# configurable defaults.
DEFAULT_CONFUSION_PAIRS: tuple[tuple[str, str], ...] = (
    ("ග", "ක"),
    ("න", "ණ"),
    ("ල", "ළ"),
    ("ශ", "ෂ"),
    ("ෂ", "ස"),
    ("ශ", "ස"),
    ("ත", "ථ"),
    ("ද", "ධ"),
    ("බ", "භ"),
)


def build_confusion_table(
    pairs: Iterable[tuple[str, str]] = DEFAULT_CONFUSION_PAIRS,
) -> dict[str, frozenset[str]]:
    """Symmetric closure of confusion pairs, keyed by base consonant."""
    table: dict[str, set[str]] = {}
    for a, b in pairs:
        if a == b:
            raise ValueError(f"self-pair in confusion table: {a!r}")
        table.setdefault(a, set()).add(b)
        table.setdefault(b, set()).add(a)
    return {k: frozenset(v) for k, v in table.items()}


@dataclass(frozen=True)
class ForgeConfig:
    per_class_count: int = 750
    seed: int = 0
    confusion_table: dict[str, frozenset[str]] = field(default_factory=build_confusion_table)
    max_resample_attempts: int = 32

    def __post_init__(self) -> None:
        if self.per_class_count < 1:
            raise ValueError("per_class_count must be >= 1")
        for key, partners in self.confusion_table.items():
            for p in partners:
                if key not in self.confusion_table.get(p, frozenset()):
                    raise ValueError(f"confusion table not symmetric at {key!r}<->{p!r}")


@dataclass(frozen=True)
class InjectionTrace:
    word_index: int
    cluster_index: int
    removed: tuple[str, ...]
    inserted: tuple[str, ...]
    error_class: ErrorClass
    seed: int

    def apply(self, original: str) -> str:
        """Replay the recorded edit over the original text."""
        return self._edit(original, self.removed, self.inserted)

    def invert(self, corrupted: str) -> str:
        """Undo the recorded edit, recovering the original text."""
        return self._edit(corrupted, self.inserted, self.removed)

    def _edit(self, text: str, removed: tuple[str, ...], inserted: tuple[str, ...]) -> str:
        words = [list(w) for w in tokenize_words(text).words]
        word = words[self.word_index]
        ci = self.cluster_index
        if tuple(word[ci : ci + len(removed)]) != removed:
            raise ValueError(
                f"trace does not match text at word {self.word_index}, cluster {ci}"
            )
        words[self.word_index] = word[:ci] + list(inserted) + word[ci + len(removed) :]
        return " ".join("".join(w) for w in words)

    def to_dict(self) -> dict:
        return {
            "word_index": self.word_index,
            "cluster_index": self.cluster_index,
            "removed": list(self.removed),
            "inserted": list(self.inserted),
            "seed": self.seed,
        }


@dataclass(frozen=True)
class CorpusSample:
    id: str
    original: str
    corrupted: str
    error_class: ErrorClass
    trace: InjectionTrace
    audio_path: str | None = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "original": self.original,
            "corrupted": self.corrupted,
            "error_class": self.error_class.value,
            "trace": self.trace.to_dict(),
            "audio_path": self.audio_path,
        }


def _derive_seed(base: int, ordinal: int) -> int:
    # splitmix64-style mix keeps per-sample streams independent and
    # order-free under parallel generation
    x = (base + 0x9E3779B97F4A7C15 * (ordinal + 1)) & 0xFFFFFFFFFFFFFFFF
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return x ^ (x >> 31)


def _eligible_sites(
    sentence: SinhalaText, error_class: ErrorClass, config: ForgeConfig
) -> list[tuple[int, int]]:
    sites: list[tuple[int, int]] = []
    for wi, word in enumerate(sentence.words):
        for ci, cluster in enumerate(word):
            if not is_sinhala_cluster(cluster):
                continue
            if error_class is ErrorClass.SUBSTITUTION:
                base = base_consonant(cluster)
                if base is not None and base in config.confusion_table:
                    sites.append((wi, ci))
            elif error_class is ErrorClass.INSERTION:
                sites.append((wi, ci))
            elif error_class is ErrorClass.OMISSION:
                if len(word) >= 2:
                    sites.append((wi, ci))
            else:  # Reversal: site is the left cluster of an adjacent pair
                if ci + 1 < len(word) and word[ci + 1] != cluster and is_sinhala_cluster(
                    word[ci + 1]
                ):
                    sites.append((wi, ci))
    return sites


def inject_error(
    sentence: SinhalaText,
    error_class: ErrorClass,
    rng_seed: int,
    config: ForgeConfig,
) -> tuple[str, InjectionTrace]:
    """Apply exactly one edit of the requested class at a seeded site.

    Sites are drawn uniformly among eligible ones; injections whose
    diagnosis would be ambiguous (e.g. a substitution that mimics a
    doubling) are rejected and re-sampled up to max_resample_attempts.
    """
    sites = _eligible_sites(sentence, error_class, config)
    if not sites:
        raise NoEligibleSite(f"no {error_class.value} site in {sentence.raw!r}")
    rng = random.Random(rng_seed)
    for _ in range(config.max_resample_attempts):
        wi, ci = rng.choice(sites)
        word = sentence.words[wi]
        cluster = word[ci]
        if error_class is ErrorClass.SUBSTITUTION:
            base = base_consonant(cluster)
            partners = sorted(config.confusion_table[base])
            replacement = replace_base_consonant(cluster, rng.choice(partners))
            removed, inserted = (cluster,), (replacement,)
        elif error_class is ErrorClass.INSERTION:
            removed, inserted = (), (cluster,)
        elif error_class is ErrorClass.OMISSION:
            removed, inserted = (cluster,), ()
        else:
            removed = (cluster, word[ci + 1])
            inserted = (word[ci + 1], cluster)
        trace = InjectionTrace(
            word_index=wi,
            cluster_index=ci,
            removed=removed,
            inserted=inserted,
            error_class=error_class,
            seed=rng_seed,
        )
        corrupted = trace.apply(sentence.raw)
        if corrupted == sentence.raw:
            continue
        if diagnose(sentence.raw, corrupted).verdict is not verdict_for(error_class):
            continue
        return corrupted, trace
    raise NoEligibleSite(
        f"no unambiguous {error_class.value} site in {sentence.raw!r} "
        f"after {config.max_resample_attempts} attempts"
    )


CLASS_ORDER = (
    ErrorClass.SUBSTITUTION,
    ErrorClass.INSERTION,
    ErrorClass.OMISSION,
    ErrorClass.REVERSAL,
)


def forge_corpus(
    clean: Sequence[tuple[str, str, str | None]],
    config: ForgeConfig,
) -> list[CorpusSample]:
    """Forge per_class_count samples per class from clean sentences.

    Each clean sentence is used at most once per class; sentences with
    no eligible site for a class are skipped for that class. Per-sample
    seeds derive from (config.seed, ordinal), so output is a pure
    function of (input, config).
    """
    sentences = [(sid, tokenize_words(text), audio) for sid, text, audio in clean]
    samples: list[CorpusSample] = []
    ordinal = 0
    for error_class in CLASS_ORDER:
        filled = 0
        for sid, sentence, audio in sentences:
            if filled >= config.per_class_count:
                break
            if not sentence.words:
                continue
            seed = _derive_seed(config.seed, ordinal)
            ordinal += 1
            try:
                corrupted, trace = inject_error(sentence, error_class, seed, config)
            except NoEligibleSite:
                continue
            samples.append(
                CorpusSample(
                    id=f"{sid}:{error_class.value}",
                    original=sentence.raw,
                    corrupted=corrupted,
                    error_class=error_class,
                    trace=trace,
                    audio_path=audio,
                )
            )
            filled += 1
        if filled < config.per_class_count:
            raise InsufficientSourceData(
                f"class {error_class.value}: only {filled} of "
                f"{config.per_class_count} samples could be forged"
            )
    return samples


def stratified_split(
    corpus: Sequence[CorpusSample], train_ratio: float, seed: int
) -> tuple[list[CorpusSample], list[CorpusSample]]:
    """Seeded per-class split; round half up on the train count."""
    if not 0 < train_ratio < 1:
        raise ValueError("train_ratio must be in (0, 1)")
    by_class: dict[ErrorClass, list[int]] = {cls: [] for cls in CLASS_ORDER}
    for idx, sample in enumerate(corpus):
        by_class[sample.error_class].append(idx)
    train_idx: set[int] = set()
    for cls in CLASS_ORDER:
        members = by_class[cls]
        if not members:
            raise EmptyClass(f"class {cls.value} has no samples")
        shuffled = list(members)
        random.Random(f"{seed}:{cls.value}").shuffle(shuffled)
        n_train = int(len(members) * train_ratio + 0.5)
        train_idx.update(shuffled[:n_train])
    train = [s for i, s in enumerate(corpus) if i in train_idx]
    test = [s for i, s in enumerate(corpus) if i not in train_idx]
    return train, test


_REQUIRED_FIELDS = ("id", "original", "corrupted", "error_class", "trace")
_TRACE_FIELDS = ("word_index", "cluster_index", "removed", "inserted", "seed")


def sample_from_dict(record: dict, line_no: int = 0) -> CorpusSample:
    for field_name in _REQUIRED_FIELDS:
        if field_name not in record:
            raise CorpusFormatError(line_no, f"missing field {field_name!r}")
    try:
        error_class = ErrorClass(record["error_class"])
    except ValueError:
        raise CorpusFormatError(
            line_no, f"invalid error_class {record['error_class']!r}"
        ) from None
    trace_rec = record["trace"]
    for field_name in _TRACE_FIELDS:
        if field_name not in trace_rec:
            raise CorpusFormatError(line_no, f"missing trace field {field_name!r}")
    trace = InjectionTrace(
        word_index=trace_rec["word_index"],
        cluster_index=trace_rec["cluster_index"],
        removed=tuple(trace_rec["removed"]),
        inserted=tuple(trace_rec["inserted"]),
        error_class=error_class,
        seed=trace_rec["seed"],
    )
    return CorpusSample(
        id=record["id"],
        original=record["original"],
        corrupted=record["corrupted"],
        error_class=error_class,
        trace=trace,
        audio_path=record.get("audio_path"),
    )


def read_corpus(path: str | Path) -> list[CorpusSample]:
    samples = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(line_no, f"invalid JSON: {exc}") from None
            samples.append(sample_from_dict(record, line_no))
    return samples


def write_corpus(samples: Iterable[CorpusSample], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for sample in samples:
            fh.write(json.dumps(sample.to_dict(), ensure_ascii=False) + "\n")
