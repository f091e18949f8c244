"""End-to-end pipeline orchestration with per-stage latency timing.

Stage order is fixed: stt (skipped for text input) -> classify ->
correct_stage1 -> correct_stage2 -> tts. Each run produces a
PipelineTrace; stage failures raise PipelineError carrying the failing
stage name and the partial trace built so far.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .audio import preprocess_audio
from .backends import MockSTT, classify_via_backend
from .config import ResolvedBackends
from .correction import BackendUnavailable, correct_two_stage
from .diagnosis import ErrorClass

STAGES = ("stt", "classify", "correct_stage1", "correct_stage2", "tts", "total")


@dataclass(frozen=True)
class StageTiming:
    ms: float
    skipped: bool = False

    def to_dict(self) -> dict:
        return {"ms": self.ms, "skipped": self.skipped}


@dataclass
class PipelineTrace:
    input_kind: str  # "audio" | "text"
    transcript: str = ""
    error_class: str = "no_error"
    stage1_output: str = ""
    stage2_output: str = ""
    audio_out: bytes | None = None
    latencies: dict[str, StageTiming] = field(default_factory=dict)
    prompts: list[str] = field(default_factory=list)

    def to_dict(self, include_audio: bool = False) -> dict:
        doc = {
            "input_kind": self.input_kind,
            "transcript": self.transcript,
            "error_class": self.error_class,
            "stage1_output": self.stage1_output,
            "stage2_output": self.stage2_output,
            "latencies": {k: v.to_dict() for k, v in self.latencies.items()},
            "prompts": list(self.prompts),
        }
        if include_audio:
            import base64

            doc["audio_out_b64"] = (
                base64.b64encode(self.audio_out).decode("ascii") if self.audio_out else None
            )
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "PipelineTrace":
        import base64

        audio = doc.get("audio_out_b64")
        return cls(
            input_kind=doc["input_kind"],
            transcript=doc["transcript"],
            error_class=doc["error_class"],
            stage1_output=doc["stage1_output"],
            stage2_output=doc["stage2_output"],
            audio_out=base64.b64decode(audio) if audio else None,
            latencies={
                k: StageTiming(ms=v["ms"], skipped=v["skipped"])
                for k, v in doc["latencies"].items()
            },
            prompts=list(doc.get("prompts", [])),
        )


class PipelineError(RuntimeError):
    def __init__(self, stage: str, trace: PipelineTrace, detail: str):
        super().__init__(f"pipeline failed at stage {stage!r}: {detail}")
        self.stage = stage
        self.trace = trace


class _Stopwatch:
    def __init__(self) -> None:
        self._t0 = time.perf_counter_ns()

    def lap_ms(self) -> float:
        now = time.perf_counter_ns()
        elapsed = (now - self._t0) / 1e6
        self._t0 = now
        return max(elapsed, 1e-6)  # monotonic clocks can tick coarsely


def run_pipeline(
    backends: ResolvedBackends,
    text: str | None = None,
    audio_bytes: bytes | None = None,
    audio_format: str = "wav",
    audio_ref: str | None = None,
) -> PipelineTrace:
    """Run one input through the full stage chain."""
    if (text is None) == (audio_bytes is None):
        raise ValueError("provide exactly one of text or audio_bytes")

    trace = PipelineTrace(input_kind="audio" if audio_bytes is not None else "text")
    total = _Stopwatch()
    watch = _Stopwatch()

    if audio_bytes is not None:
        try:
            buffer = preprocess_audio(audio_bytes, audio_format)
            trace.latencies["preprocess"] = StageTiming(ms=watch.lap_ms())
            trace.transcript = backends.stt.transcribe(buffer, audio_ref=audio_ref)
        except BackendUnavailable as exc:
            trace.latencies["total"] = StageTiming(ms=total.lap_ms())
            raise PipelineError("stt", trace, exc.detail) from None
        trace.latencies["stt"] = StageTiming(ms=watch.lap_ms())
    else:
        # text path: MockSTT still applies its configured corruption so
        # audio-free evaluation runs can simulate ASR noise
        if isinstance(backends.stt, MockSTT):
            trace.transcript = backends.stt.transcribe_text(text)
        else:
            trace.transcript = text
        trace.latencies["stt"] = StageTiming(ms=0.0, skipped=True)

    error_class: ErrorClass | None = None
    if backends.classifier is not None:
        try:
            error_class = classify_via_backend(trace.transcript, backends.classifier)
            trace.error_class = error_class.value
        except BackendUnavailable:
            # correction can run un-prompted on the transcript alone
            trace.error_class = "no_error"
        trace.latencies["classify"] = StageTiming(ms=watch.lap_ms())
    else:
        trace.latencies["classify"] = StageTiming(ms=0.0, skipped=True)

    try:
        result = correct_two_stage(
            trace.transcript,
            error_class,
            backends.correct_stage1,
            backends.correct_stage2,
            degrade_on_stage2_failure=backends.degrade_on_stage2_failure,
        )
    except BackendUnavailable as exc:
        trace.latencies["total"] = StageTiming(ms=total.lap_ms())
        raise PipelineError(exc.stage, trace, exc.detail) from None
    watch.lap_ms()
    trace.stage1_output = result.stage1_output
    trace.stage2_output = result.stage2_output
    trace.prompts = [p.instruction for p in result.prompts_used]
    trace.latencies["correct_stage1"] = StageTiming(ms=result.stage1_ms)
    trace.latencies["correct_stage2"] = StageTiming(ms=result.stage2_ms)

    try:
        trace.audio_out = backends.tts.synthesize(result.stage2_output)
    except BackendUnavailable as exc:
        trace.latencies["total"] = StageTiming(ms=total.lap_ms())
        raise PipelineError("tts", trace, exc.detail) from None
    trace.latencies["tts"] = StageTiming(ms=watch.lap_ms())

    trace.latencies["total"] = StageTiming(ms=total.lap_ms())
    return trace
