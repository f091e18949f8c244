"""Error-class diagnosis and error-aware prompt construction.

The reference-based diagnostic aligns original and corrupted text at
grapheme-cluster granularity and matches single-edit signatures; it is
exact whenever the original is known (dataset validation, mock
backends). An external classifier can fill the same role through the
backend adapter in :mod:`sinassist.backends`.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .metrics import AlignOp, EditScript, OpKind, align
from .text import tokenize_words


class ErrorClass(str, Enum):
    SUBSTITUTION = "substitution"
    INSERTION = "insertion"
    OMISSION = "omission"
    REVERSAL = "reversal"


class Verdict(str, Enum):
    SUBSTITUTION = "substitution"
    INSERTION = "insertion"
    OMISSION = "omission"
    REVERSAL = "reversal"
    NO_ERROR = "no_error"
    COMPLEX = "complex"


def verdict_for(error_class: ErrorClass) -> Verdict:
    return Verdict(error_class.value)


@dataclass(frozen=True)
class Diagnosis:
    verdict: Verdict
    evidence: EditScript


def diagnose(original: str, corrupted: str) -> Diagnosis:
    """Classify the difference between original and corrupted text.

    Cluster-level alignment per word, pooled over words. Signatures:
    one Substitute -> substitution; one Delete -> omission; one Insert
    -> insertion; two adjacent crossing Substitutes -> reversal
    (checked before counting); zero edits -> no_error; anything else,
    including word-count changes, -> complex.
    """
    orig = tokenize_words(original)
    corr = tokenize_words(corrupted)
    if len(orig.words) != len(corr.words):
        script = align(orig.raw.split(" "), corr.raw.split(" "))
        return Diagnosis(verdict=Verdict.COMPLEX, evidence=script)

    all_ops: list[AlignOp] = []
    edits: list[tuple[int, AlignOp]] = []
    for wi, (ow, cw) in enumerate(zip(orig.words, corr.words)):
        script = align(ow, cw)
        all_ops.extend(script.ops)
        edits.extend((wi, op) for op in script.edits())
    evidence = EditScript(ops=tuple(all_ops))

    if not edits:
        return Diagnosis(verdict=Verdict.NO_ERROR, evidence=evidence)

    if len(edits) == 2:
        (w1, a), (w2, b) = edits
        if (
            w1 == w2
            and a.kind is OpKind.SUBSTITUTE
            and b.kind is OpKind.SUBSTITUTE
            and b.ref_pos == a.ref_pos + 1
            and a.ref_token == b.hyp_token
            and b.ref_token == a.hyp_token
            and a.ref_token != b.ref_token
        ):
            return Diagnosis(verdict=Verdict.REVERSAL, evidence=evidence)

    if len(edits) == 1:
        op = edits[0][1]
        if op.kind is OpKind.SUBSTITUTE:
            return Diagnosis(verdict=Verdict.SUBSTITUTION, evidence=evidence)
        if op.kind is OpKind.DELETE:
            return Diagnosis(verdict=Verdict.OMISSION, evidence=evidence)
        return Diagnosis(verdict=Verdict.INSERTION, evidence=evidence)

    return Diagnosis(verdict=Verdict.COMPLEX, evidence=evidence)


# Instruction templates are Sinhala-ready plain text with a {text}
# placeholder; override any subset via build_prompt(templates=...).
DEFAULT_TEMPLATES: dict[ErrorClass, str] = {
    ErrorClass.OMISSION: (
        "මෙම වාක්‍යයේ අඩුවී ඇති අකුරු හෝ නිපාත ඇතුළත් කර නිවැරදි කරන්න: {text}"
    ),
    ErrorClass.SUBSTITUTION: (
        "මෙම වාක්‍යයේ වැරදි ලෙස යොදා ඇති අකුර හෝ වචනය නිවැරදි එකින් ප්‍රතිස්ථාපනය කරන්න: {text}"
    ),
    ErrorClass.INSERTION: (
        "මෙම වාක්‍යයේ අමතරව එකතු වී ඇති අකුර ඉවත් කර නිවැරදි කරන්න: {text}"
    ),
    ErrorClass.REVERSAL: (
        "මෙම වාක්‍යයේ මාරු වී ඇති අකුරු නැවත නිවැරදි අනුපිළිවෙලට සකසන්න: {text}"
    ),
}


@dataclass(frozen=True)
class Prompt:
    error_class: ErrorClass
    instruction: str
    payload: str


def build_prompt(
    error_class: ErrorClass,
    text: str,
    templates: dict[ErrorClass, str] | None = None,
) -> Prompt:
    """Interpolate the class-specific instruction template."""
    if not text:
        raise ValueError("prompt payload must be non-empty")
    if not isinstance(error_class, ErrorClass):
        raise ValueError(f"unknown error class: {error_class!r}")
    table = dict(DEFAULT_TEMPLATES)
    if templates:
        table.update(templates)
    return Prompt(
        error_class=error_class,
        instruction=table[error_class].format(text=text),
        payload=text,
    )
