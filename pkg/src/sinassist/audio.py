"""WAV PCM16 decode, mono downmix, 16 kHz resample, silence trimming.

Noise reduction is a pass-through hook: no algorithm is mandated and
deterministic output matters more than denoising here.
"""

from __future__ import annotations

import io
import math
import struct
import wave
from dataclasses import dataclass

import numpy as np
from scipy.signal import resample_poly

TARGET_RATE = 16000
FRAME_MS = 25
HOP_MS = 10
SILENCE_DBFS = -40.0


class UnsupportedFormat(ValueError):
    pass


class CorruptStream(ValueError):
    pass


@dataclass(frozen=True)
class AudioBuffer:
    samples: np.ndarray  # int16, mono after preprocessing
    sample_rate: int
    channels: int = 1

    @property
    def duration_s(self) -> float:
        return len(self.samples) / self.sample_rate

    def to_wav_bytes(self) -> bytes:
        buf = io.BytesIO()
        with wave.open(buf, "wb") as wf:
            wf.setnchannels(self.channels)
            wf.setsampwidth(2)
            wf.setframerate(self.sample_rate)
            wf.writeframes(self.samples.astype("<i2").tobytes())
        return buf.getvalue()


def decode_wav(data: bytes) -> tuple[np.ndarray, int]:
    """Decode uncompressed WAV PCM16 to (frames x channels, rate)."""
    try:
        with wave.open(io.BytesIO(data), "rb") as wf:
            if wf.getsampwidth() != 2:
                raise UnsupportedFormat(
                    f"only PCM16 WAV is supported, got {wf.getsampwidth() * 8}-bit"
                )
            channels = wf.getnchannels()
            rate = wf.getframerate()
            raw = wf.readframes(wf.getnframes())
    except (wave.Error, EOFError) as exc:
        raise CorruptStream(f"not a valid WAV stream: {exc}") from None
    samples = np.frombuffer(raw, dtype="<i2").reshape(-1, channels)
    return samples, rate


def decode_audio(data: bytes, declared_format: str) -> tuple[np.ndarray, int]:
    fmt = declared_format.lower().lstrip(".")
    if fmt == "wav":
        return decode_wav(data)
    if fmt == "flac":
        try:
            import soundfile  # optional; not bundled
        except ImportError:
            raise UnsupportedFormat("FLAC input requires the soundfile package") from None
        try:
            floats, rate = soundfile.read(io.BytesIO(data), always_2d=True)
        except Exception as exc:
            raise CorruptStream(f"not a valid FLAC stream: {exc}") from None
        return (np.clip(floats, -1.0, 1.0) * 32767.0).astype(np.int16), rate
    raise UnsupportedFormat(f"unsupported audio format: {declared_format!r}")


def _frame_rms(x: np.ndarray, frame_len: int, hop: int) -> np.ndarray:
    # final frames are clipped so the tail is always covered
    starts = range(0, len(x), hop)
    return np.array(
        [math.sqrt(float(np.mean(np.square(x[s : s + frame_len])))) for s in starts]
    )


def _dbfs(rms: float) -> float:
    if rms <= 0.0:
        return -math.inf
    return 20.0 * math.log10(rms)


def trim_silence(
    samples: np.ndarray,
    rate: int,
    threshold_dbfs: float = SILENCE_DBFS,
    frame_ms: int = FRAME_MS,
    hop_ms: int = HOP_MS,
) -> np.ndarray:
    """Drop leading/trailing frames whose RMS is below the threshold.

    Coarse scan over frame_ms frames at hop_ms hop, then the boundary
    is refined to hop resolution inside the first/last voiced frame so
    trimming lands within one hop of the true signal edges.
    """
    if len(samples) == 0:
        return samples
    x = samples.astype(np.float64) / 32768.0
    frame_len = int(rate * frame_ms / 1000)
    hop = int(rate * hop_ms / 1000)
    rms = _frame_rms(x, frame_len, hop)
    voiced = [i for i, r in enumerate(rms) if _dbfs(r) >= threshold_dbfs]
    if not voiced:
        return samples[:0]
    first, last = voiced[0], voiced[-1]

    start = first * hop
    for off in range(0, frame_len, hop):
        window = x[start + off : start + off + hop]
        if len(window) and _dbfs(math.sqrt(float(np.mean(np.square(window))))) >= threshold_dbfs:
            start = start + off
            break

    end = min(last * hop + frame_len, len(samples))
    for off in range(0, frame_len, hop):
        window = x[max(end - off - hop, 0) : end - off]
        if len(window) and _dbfs(math.sqrt(float(np.mean(np.square(window))))) >= threshold_dbfs:
            end = end - off
            break

    return samples[start:end]


def reduce_noise(samples: np.ndarray, rate: int) -> np.ndarray:
    """Noise-reduction hook; intentionally a pass-through."""
    return samples


def preprocess_audio(
    data: bytes,
    declared_format: str = "wav",
    threshold_dbfs: float = SILENCE_DBFS,
    frame_ms: int = FRAME_MS,
    hop_ms: int = HOP_MS,
) -> AudioBuffer:
    """Decode, downmix to mono, resample to 16 kHz, and trim silence."""
    frames, rate = decode_audio(data, declared_format)
    mono = frames.astype(np.float64).mean(axis=1)
    if rate != TARGET_RATE:
        g = math.gcd(TARGET_RATE, rate)
        mono = resample_poly(mono, TARGET_RATE // g, rate // g)
    mono = reduce_noise(mono, TARGET_RATE)
    pcm = np.clip(np.round(mono), -32768, 32767).astype(np.int16)
    trimmed = trim_silence(pcm, TARGET_RATE, threshold_dbfs, frame_ms, hop_ms)
    return AudioBuffer(samples=trimmed, sample_rate=TARGET_RATE, channels=1)


def silence_wav(duration_s: float, rate: int = TARGET_RATE) -> bytes:
    """A valid mono PCM16 WAV of silence, used by the TTS mock."""
    n = int(round(duration_s * rate))
    buf = io.BytesIO()
    with wave.open(buf, "wb") as wf:
        wf.setnchannels(1)
        wf.setsampwidth(2)
        wf.setframerate(rate)
        wf.writeframes(struct.pack(f"<{n}h", *([0] * n)))
    return buf.getvalue()
