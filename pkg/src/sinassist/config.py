"""Backend configuration: JSON config file with environment overrides.

Every pipeline role (stt, classifier, correct_stage1, correct_stage2,
tts) resolves to exactly one implementation, either an HTTP adapter or
a named in-process mock. Environment variables override file keys as
SINASSIST_<ROLE>_<FIELD>, e.g. SINASSIST_STT_KIND=http.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from . import backends as bk
from .diagnosis import ErrorClass
from .forge import CorpusSample, read_corpus

ENV_PREFIX = "SINASSIST"

ROLES = ("stt", "classifier", "correct_stage1", "correct_stage2", "tts")

MOCK_KINDS = {
    "stt": ("mock-echo",),
    "classifier": ("mock-oracle", "mock-fixed", "disabled"),
    "correct_stage1": ("mock-identity", "mock-repair"),
    "correct_stage2": ("mock-identity", "mock-repair"),
    "tts": ("mock-silence",),
}

DEFAULT_TIMEOUTS_MS = {
    "stt": 10_000,
    "classifier": 5_000,
    "correct_stage1": 5_000,
    "correct_stage2": 5_000,
    "tts": 5_000,
}


class ConfigError(ValueError):
    def __init__(self, key: str, detail: str):
        super().__init__(f"config key {key!r}: {detail}")
        self.key = key


@dataclass(frozen=True)
class RoleConfig:
    kind: str
    endpoint: str | None = None
    timeout_ms: int = 5_000
    params: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class BackendConfig:
    roles: dict[str, RoleConfig]
    degrade_on_stage2_failure: bool = False

    def __post_init__(self) -> None:
        for role in ROLES:
            if role not in self.roles:
                raise ConfigError(role, "role not configured")
            rc = self.roles[role]
            if rc.timeout_ms <= 0:
                raise ConfigError(f"{role}.timeout_ms", "must be > 0")
            if rc.kind == "http":
                if not rc.endpoint:
                    raise ConfigError(f"{role}.endpoint", "required for kind=http")
            elif rc.kind not in MOCK_KINDS[role]:
                raise ConfigError(
                    f"{role}.kind",
                    f"unknown kind {rc.kind!r}; expected http or one of {MOCK_KINDS[role]}",
                )


def mock_config(**overrides: RoleConfig) -> BackendConfig:
    """All-mock configuration: echo STT, disabled classifier, identity
    correction, silent TTS. Tests and demos start from this."""
    roles = {
        "stt": RoleConfig(kind="mock-echo", timeout_ms=10_000),
        "classifier": RoleConfig(kind="disabled"),
        "correct_stage1": RoleConfig(kind="mock-identity"),
        "correct_stage2": RoleConfig(kind="mock-identity"),
        "tts": RoleConfig(kind="mock-silence"),
    }
    roles.update(overrides)
    return BackendConfig(roles=roles)


def load_config(path: str | Path, env: dict[str, str] | None = None) -> BackendConfig:
    """Read the JSON config file and apply environment overrides."""
    environ = os.environ if env is None else env
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(str(path), f"invalid JSON: {exc}") from None
    roles = {}
    for role in ROLES:
        entry = dict(doc.get(role, {}))
        for field_name in ("kind", "endpoint", "timeout_ms"):
            env_key = f"{ENV_PREFIX}_{role.upper()}_{field_name.upper()}"
            if env_key in environ:
                value: Any = environ[env_key]
                if field_name == "timeout_ms":
                    value = int(value)
                entry[field_name] = value
        if "kind" not in entry:
            raise ConfigError(f"{role}.kind", "missing")
        roles[role] = RoleConfig(
            kind=entry["kind"],
            endpoint=entry.get("endpoint"),
            timeout_ms=int(entry.get("timeout_ms", DEFAULT_TIMEOUTS_MS[role])),
            params=entry.get("params", {}),
        )
    return BackendConfig(
        roles=roles,
        degrade_on_stage2_failure=bool(doc.get("degrade_on_stage2_failure", False)),
    )


@dataclass(frozen=True)
class ResolvedBackends:
    stt: bk.SttBackend
    classifier: bk.ClassifierBackend | None  # None: classification disabled
    correct_stage1: Any
    correct_stage2: Any
    tts: bk.TtsBackend
    degrade_on_stage2_failure: bool = False


def _corpus_for(rc: RoleConfig, samples: Sequence[CorpusSample] | None, key: str):
    if samples is not None:
        return samples
    corpus_path = rc.params.get("corpus")
    if not corpus_path:
        raise ConfigError(f"{key}.params.corpus", "corpus file required for this mock")
    return read_corpus(corpus_path)


def resolve_backends(
    config: BackendConfig, samples: Sequence[CorpusSample] | None = None
) -> ResolvedBackends:
    """Instantiate one backend per role.

    Oracle/repair mocks need forged samples; pass them directly (batch
    runs do) or point params.corpus at a corpus file.
    """
    resolved: dict[str, Any] = {}

    rc = config.roles["stt"]
    if rc.kind == "http":
        resolved["stt"] = bk.HttpSTT(endpoint=rc.endpoint, timeout_ms=rc.timeout_ms)
    else:
        transcript_map = dict(rc.params.get("transcripts", {}))
        sidecar = rc.params.get("transcripts_file")
        if sidecar:
            with open(sidecar, encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        rec = json.loads(line)
                        transcript_map[rec["audio_path"]] = rec["text"]
        resolved["stt"] = bk.MockSTT(
            transcript_map=transcript_map,
            echo_text=rc.params.get("echo_text"),
            wer_rate=float(rc.params.get("wer_rate", 0.0)),
            seed=int(rc.params.get("seed", 0)),
        )

    rc = config.roles["classifier"]
    if rc.kind == "http":
        resolved["classifier"] = bk.HttpClassifier(rc.endpoint, timeout_ms=rc.timeout_ms)
    elif rc.kind == "disabled":
        resolved["classifier"] = None
    elif rc.kind == "mock-fixed":
        resolved["classifier"] = bk.MockClassifier(
            fixed_label=ErrorClass(rc.params["label"])
        )
    else:
        resolved["classifier"] = bk.MockClassifier.from_samples(
            _corpus_for(rc, samples, "classifier")
        )

    for role in ("correct_stage1", "correct_stage2"):
        rc = config.roles[role]
        if rc.kind == "http":
            resolved[role] = bk.HttpCorrector(rc.endpoint, stage=role, timeout_ms=rc.timeout_ms)
        elif rc.kind == "mock-identity":
            resolved[role] = bk.IdentityCorrector()
        else:
            resolved[role] = bk.RepairCorrector.from_samples(_corpus_for(rc, samples, role))

    rc = config.roles["tts"]
    if rc.kind == "http":
        resolved["tts"] = bk.HttpTTS(rc.endpoint, timeout_ms=rc.timeout_ms)
    else:
        resolved["tts"] = bk.MockTTS()

    return ResolvedBackends(
        stt=resolved["stt"],
        classifier=resolved["classifier"],
        correct_stage1=resolved["correct_stage1"],
        correct_stage2=resolved["correct_stage2"],
        tts=resolved["tts"],
        degrade_on_stage2_failure=config.degrade_on_stage2_failure,
    )
