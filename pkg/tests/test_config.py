import json

import pytest

from sinassist.backends import HttpSTT, IdentityCorrector, MockSTT, MockTTS
from sinassist.config import (
    ConfigError,
    RoleConfig,
    load_config,
    mock_config,
    resolve_backends,
)


def write_config(tmp_path, doc):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(doc))
    return path


BASE = {
    "stt": {"kind": "mock-echo"},
    "classifier": {"kind": "disabled"},
    "correct_stage1": {"kind": "mock-identity"},
    "correct_stage2": {"kind": "mock-identity"},
    "tts": {"kind": "mock-silence"},
}


def test_load_mock_config(tmp_path):
    config = load_config(write_config(tmp_path, BASE))
    backends = resolve_backends(config)
    assert isinstance(backends.stt, MockSTT)
    assert backends.classifier is None
    assert isinstance(backends.correct_stage1, IdentityCorrector)
    assert isinstance(backends.tts, MockTTS)


def test_env_overrides(tmp_path):
    path = write_config(tmp_path, BASE)
    env = {
        "SINASSIST_STT_KIND": "http",
        "SINASSIST_STT_ENDPOINT": "http://localhost:9000/stt",
        "SINASSIST_STT_TIMEOUT_MS": "1234",
    }
    config = load_config(path, env=env)
    backends = resolve_backends(config)
    assert isinstance(backends.stt, HttpSTT)
    assert backends.stt.endpoint == "http://localhost:9000/stt"
    assert backends.stt.timeout_ms == 1234


def test_missing_role_kind(tmp_path):
    doc = dict(BASE)
    del doc["tts"]
    with pytest.raises(ConfigError) as err:
        load_config(write_config(tmp_path, doc))
    assert "tts" in str(err.value)


def test_http_requires_endpoint(tmp_path):
    doc = dict(BASE, stt={"kind": "http"})
    with pytest.raises(ConfigError) as err:
        load_config(write_config(tmp_path, doc))
    assert "endpoint" in str(err.value)


def test_unknown_kind(tmp_path):
    doc = dict(BASE, tts={"kind": "mock-shout"})
    with pytest.raises(ConfigError) as err:
        load_config(write_config(tmp_path, doc))
    assert "mock-shout" in str(err.value)


def test_nonpositive_timeout_rejected():
    with pytest.raises(ConfigError):
        mock_config(stt=RoleConfig(kind="mock-echo", timeout_ms=0))


def test_oracle_mock_requires_corpus():
    config = mock_config(classifier=RoleConfig(kind="mock-oracle"))
    with pytest.raises(ConfigError) as err:
        resolve_backends(config)
    assert "corpus" in str(err.value)


def test_invalid_json(tmp_path):
    path = tmp_path / "config.json"
    path.write_text("{nope")
    with pytest.raises(ConfigError):
        load_config(path)
