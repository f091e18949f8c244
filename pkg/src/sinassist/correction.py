"""Two-stage correction orchestration and the rule-based baseline.

Stage 1 applies structural/grammatical correction under an error-aware
prompt; stage 2 refines fluency. Both stages are pluggable backends.
The baseline builds a word confusion dictionary from a training split
and applies per-token substitutions.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Protocol, Sequence

from .diagnosis import ErrorClass, Prompt, build_prompt
from .forge import CorpusSample
from .metrics import OpKind, align


class BackendUnavailable(RuntimeError):
    def __init__(self, stage: str, detail: str = ""):
        super().__init__(f"backend unavailable at stage {stage}: {detail}")
        self.stage = stage
        self.detail = detail


class CorrectionBackend(Protocol):
    def correct(
        self, text: str, instruction: str | None = None, error_class: str | None = None
    ) -> str: ...


FLUENCY_INSTRUCTION = "පහත වාක්‍යය ස්වාභාවික හා චතුර සිංහල බසින් නැවත ලියන්න: {text}"


@dataclass(frozen=True)
class CorrectionResult:
    input: str
    error_class: ErrorClass | None
    stage1_output: str
    stage2_output: str
    prompts_used: tuple[Prompt, ...]
    stage1_ms: float
    stage2_ms: float
    stage1_fallback: bool = False
    stage2_fallback: bool = False


def correct_two_stage(
    text: str,
    error_class: ErrorClass | None,
    stage1: CorrectionBackend,
    stage2: CorrectionBackend,
    degrade_on_stage2_failure: bool = False,
) -> CorrectionResult:
    """Run structural correction, then fluency refinement.

    Empty backend output falls back to that stage's input (recorded).
    A stage-2 failure raises unless degrade_on_stage2_failure is set,
    in which case stage1_output is carried through as final.
    """
    if not text:
        raise ValueError("text must be non-empty")
    prompts: list[Prompt] = []
    instruction = None
    if error_class is not None:
        prompt = build_prompt(error_class, text)
        prompts.append(prompt)
        instruction = prompt.instruction

    t0 = time.perf_counter()
    stage1_output = stage1.correct(
        text,
        instruction=instruction,
        error_class=error_class.value if error_class else None,
    )
    stage1_ms = (time.perf_counter() - t0) * 1000.0
    stage1_fallback = not stage1_output
    if stage1_fallback:
        stage1_output = text

    fluency = FLUENCY_INSTRUCTION.format(text=stage1_output)
    t0 = time.perf_counter()
    try:
        stage2_output = stage2.correct(stage1_output, instruction=fluency)
    except BackendUnavailable:
        if not degrade_on_stage2_failure:
            raise
        stage2_output = ""
    stage2_ms = (time.perf_counter() - t0) * 1000.0
    stage2_fallback = not stage2_output
    if stage2_fallback:
        stage2_output = stage1_output

    return CorrectionResult(
        input=text,
        error_class=error_class,
        stage1_output=stage1_output,
        stage2_output=stage2_output,
        prompts_used=tuple(prompts),
        stage1_ms=stage1_ms,
        stage2_ms=stage2_ms,
        stage1_fallback=stage1_fallback,
        stage2_fallback=stage2_fallback,
    )


@dataclass(frozen=True)
class ConfusionDictionary:
    """corrupted word -> counted corrections; lookup by frequency,
    ties broken by lexicographically smallest correction."""

    entries: dict[str, dict[str, int]] = field(default_factory=dict)

    def lookup(self, word: str) -> str | None:
        candidates = self.entries.get(word)
        if not candidates:
            return None
        return min(candidates, key=lambda w: (-candidates[w], w))


def build_dictionary(train: Sequence[CorpusSample]) -> ConfusionDictionary:
    """Tally corrupted->original word substitutions from a train split."""
    if not train:
        raise ValueError("train split is empty")
    entries: dict[str, dict[str, int]] = {}
    for sample in train:
        script = align(sample.corrupted.split(" "), sample.original.split(" "))
        for op in script.ops:
            if op.kind is OpKind.SUBSTITUTE and op.ref_token != op.hyp_token:
                slot = entries.setdefault(op.ref_token, {})
                slot[op.hyp_token] = slot.get(op.hyp_token, 0) + 1
    return ConfusionDictionary(entries=entries)


def rule_based_correct(text: str, dictionary: ConfusionDictionary) -> str:
    """Single left-to-right pass of per-token dictionary substitution."""
    out = []
    for token in text.split(" "):
        replacement = dictionary.lookup(token)
        out.append(replacement if replacement is not None else token)
    return " ".join(out)


def write_dictionary(dictionary: ConfusionDictionary, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for corrupted in sorted(dictionary.entries):
            for corrected, freq in sorted(dictionary.entries[corrupted].items()):
                fh.write(
                    json.dumps(
                        {"corrupted": corrupted, "corrected": corrected, "frequency": freq},
                        ensure_ascii=False,
                    )
                    + "\n"
                )


def read_dictionary(path: str | Path) -> ConfusionDictionary:
    entries: dict[str, dict[str, int]] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            entries.setdefault(record["corrupted"], {})[record["corrected"]] = record[
                "frequency"
            ]
    return ConfusionDictionary(entries=entries)
