"""Pluggable pipeline backends: wire-contract HTTP adapters and the
deterministic in-process mocks that stand in for the real models.

Wire contracts:
  stt        POST {audio_b64, format} -> {transcript}
  classifier POST {text} -> {error_class, confidence?}
  correction POST {text, instruction?, error_class?} -> {text}
  tts        POST {text} -> audio/wav bytes
"""

from __future__ import annotations

import base64
import random
from dataclasses import dataclass, field
from typing import Protocol, Sequence

import httpx

from .audio import AudioBuffer, silence_wav
from .correction import BackendUnavailable
from .diagnosis import ErrorClass
from .forge import CorpusSample
from .text import tokenize_words


class InvalidLabel(ValueError):
    pass


class SttBackend(Protocol):
    def transcribe(self, audio: AudioBuffer, audio_ref: str | None = None) -> str: ...


class ClassifierBackend(Protocol):
    def classify(self, text: str) -> ErrorClass: ...


class TtsBackend(Protocol):
    def synthesize(self, text: str) -> bytes: ...


def classify_via_backend(text: str, backend: ClassifierBackend) -> ErrorClass:
    """Delegate to a classifier backend, enforcing the four-class enum."""
    label = backend.classify(text)
    if not isinstance(label, ErrorClass):
        raise InvalidLabel(f"backend returned out-of-enum label: {label!r}")
    return label


# --- HTTP adapters ---------------------------------------------------------


def _post_json(endpoint: str, payload: dict, timeout_ms: int, stage: str) -> httpx.Response:
    try:
        response = httpx.post(endpoint, json=payload, timeout=timeout_ms / 1000.0)
        response.raise_for_status()
    except httpx.HTTPError as exc:
        raise BackendUnavailable(stage, str(exc)) from None
    return response


@dataclass(frozen=True)
class HttpSTT:
    endpoint: str
    timeout_ms: int = 10_000

    def transcribe(self, audio: AudioBuffer, audio_ref: str | None = None) -> str:
        payload = {
            "audio_b64": base64.b64encode(audio.to_wav_bytes()).decode("ascii"),
            "format": "wav",
        }
        return _post_json(self.endpoint, payload, self.timeout_ms, "stt").json()["transcript"]


@dataclass(frozen=True)
class HttpClassifier:
    endpoint: str
    timeout_ms: int = 5_000

    def classify(self, text: str) -> ErrorClass:
        body = _post_json(self.endpoint, {"text": text}, self.timeout_ms, "classify").json()
        label = body.get("error_class")
        try:
            return ErrorClass(label)
        except ValueError:
            raise InvalidLabel(f"backend returned out-of-enum label: {label!r}") from None


@dataclass(frozen=True)
class HttpCorrector:
    endpoint: str
    stage: str = "correct"
    timeout_ms: int = 5_000

    def correct(
        self, text: str, instruction: str | None = None, error_class: str | None = None
    ) -> str:
        payload: dict = {"text": text}
        if instruction is not None:
            payload["instruction"] = instruction
        if error_class is not None:
            payload["error_class"] = error_class
        return _post_json(self.endpoint, payload, self.timeout_ms, self.stage).json()["text"]


@dataclass(frozen=True)
class HttpTTS:
    endpoint: str
    timeout_ms: int = 5_000

    def synthesize(self, text: str) -> bytes:
        return _post_json(self.endpoint, {"text": text}, self.timeout_ms, "tts").content


# --- Mocks -----------------------------------------------------------------


def _stable_seed(base: int, key: str) -> int:
    h = 0
    for ch in key:
        h = (h * 1000003 + ord(ch)) & 0xFFFFFFFFFFFFFFFF
    return base ^ h


@dataclass(frozen=True)
class MockSTT:
    """Transcript from a sidecar map (audio_ref -> text) or echo.

    With wer_rate > 0, each token is independently replaced by an
    out-of-vocabulary token with that probability, under a per-utterance
    seed, so measured corpus WER concentrates around wer_rate.
    """

    transcript_map: dict[str, str] = field(default_factory=dict)
    echo_text: str | None = None
    wer_rate: float = 0.0
    seed: int = 0

    def transcribe(self, audio: AudioBuffer, audio_ref: str | None = None) -> str:
        if audio_ref is not None and audio_ref in self.transcript_map:
            text = self.transcript_map[audio_ref]
        elif self.echo_text is not None:
            text = self.echo_text
        else:
            raise BackendUnavailable("stt", f"no transcript for {audio_ref!r}")
        return self._corrupt(text)

    def transcribe_text(self, text: str) -> str:
        return self._corrupt(text)

    def _corrupt(self, text: str) -> str:
        if self.wer_rate <= 0.0:
            return text
        rng = random.Random(_stable_seed(self.seed, text))
        tokens = text.split(" ")
        out = []
        for i, token in enumerate(tokens):
            if rng.random() < self.wer_rate:
                out.append(f"<asr-err-{i}>")
            else:
                out.append(token)
        return " ".join(out)


@dataclass(frozen=True)
class MockClassifier:
    """Oracle over forged samples (corrupted text -> injected class) or
    a fixed label."""

    oracle: dict[str, ErrorClass] = field(default_factory=dict)
    fixed_label: ErrorClass | None = None

    @classmethod
    def from_samples(cls, samples: Sequence[CorpusSample]) -> "MockClassifier":
        return cls(oracle={s.corrupted: s.error_class for s in samples})

    def classify(self, text: str) -> ErrorClass:
        if text in self.oracle:
            return self.oracle[text]
        if self.fixed_label is not None:
            return self.fixed_label
        raise BackendUnavailable("classify", f"no oracle label for {text!r}")


@dataclass(frozen=True)
class IdentityCorrector:
    def correct(
        self, text: str, instruction: str | None = None, error_class: str | None = None
    ) -> str:
        return text


@dataclass(frozen=True)
class RepairCorrector:
    """Inverts the recorded injection edit for known corrupted texts;
    unknown input passes through unchanged."""

    samples: dict[str, CorpusSample] = field(default_factory=dict)

    @classmethod
    def from_samples(cls, samples: Sequence[CorpusSample]) -> "RepairCorrector":
        return cls(samples={s.corrupted: s for s in samples})

    def correct(
        self, text: str, instruction: str | None = None, error_class: str | None = None
    ) -> str:
        sample = self.samples.get(text)
        if sample is None:
            return text
        return sample.trace.invert(text)


@dataclass(frozen=True)
class FailingBackend:
    """Stands in for an unreachable endpoint in tests."""

    stage: str

    def transcribe(self, audio: AudioBuffer, audio_ref: str | None = None) -> str:
        raise BackendUnavailable(self.stage, "mock failure")

    def classify(self, text: str) -> ErrorClass:
        raise BackendUnavailable(self.stage, "mock failure")

    def correct(
        self, text: str, instruction: str | None = None, error_class: str | None = None
    ) -> str:
        raise BackendUnavailable(self.stage, "mock failure")

    def synthesize(self, text: str) -> bytes:
        raise BackendUnavailable(self.stage, "mock failure")


MOCK_TTS_MS_PER_CLUSTER = 60


@dataclass(frozen=True)
class MockTTS:
    """Silent 16 kHz mono WAV, 60 ms per grapheme cluster."""

    def synthesize(self, text: str) -> bytes:
        clusters = sum(len(w) for w in tokenize_words(text).words)
        return silence_wav(clusters * MOCK_TTS_MS_PER_CLUSTER / 1000.0)
