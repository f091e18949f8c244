"""HTTP service exposing the pipeline and its individual stages.

Endpoints (JSON unless noted):
  GET  /v1/health                         -> {status}
  POST /v1/transcribe  (multipart file or {audio_b64, format})
                                          -> {transcript, latency_ms}
  POST /v1/classify    {text}             -> {error_class}
  POST /v1/correct     {text, error_class?}
                                          -> {stage1_output, stage2_output, latencies}
  POST /v1/synthesize  {text}             -> audio/wav bytes
  POST /v1/pipeline    (multipart file or {text})
                                          -> PipelineTrace; audio_out inline
                                             with ?inline=1, else as a URL
  GET  /v1/audio/{audio_id}               -> audio/wav bytes
"""

from __future__ import annotations

import base64
import time
import uuid

from fastapi import FastAPI, Request, UploadFile
from fastapi.responses import JSONResponse, Response

from .audio import CorruptStream, UnsupportedFormat, preprocess_audio
from .backends import InvalidLabel, classify_via_backend
from .config import BackendConfig, ResolvedBackends, resolve_backends
from .correction import BackendUnavailable, correct_two_stage
from .diagnosis import ErrorClass
from .pipeline import PipelineError, run_pipeline


def create_app(backends: ResolvedBackends) -> FastAPI:
    app = FastAPI(title="sinassist")
    audio_store: dict[str, bytes] = {}

    @app.get("/v1/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/v1/transcribe")
    async def transcribe(request: Request, file: UploadFile | None = None):
        t0 = time.perf_counter()
        try:
            if file is not None:
                data = await file.read()
                fmt = (file.filename or "wav").rsplit(".", 1)[-1]
            else:
                body = await request.json()
                data = base64.b64decode(body["audio_b64"])
                fmt = body.get("format", "wav")
            buffer = preprocess_audio(data, fmt)
            transcript = backends.stt.transcribe(buffer)
        except (UnsupportedFormat, CorruptStream) as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        except BackendUnavailable as exc:
            return JSONResponse({"error": str(exc), "stage": exc.stage}, status_code=502)
        return {"transcript": transcript, "latency_ms": (time.perf_counter() - t0) * 1000.0}

    @app.post("/v1/classify")
    async def classify(body: dict):
        if backends.classifier is None:
            return JSONResponse({"error": "classifier disabled"}, status_code=503)
        try:
            label = classify_via_backend(body["text"], backends.classifier)
        except InvalidLabel as exc:
            return JSONResponse({"error": str(exc)}, status_code=502)
        except BackendUnavailable as exc:
            return JSONResponse({"error": str(exc), "stage": exc.stage}, status_code=502)
        return {"error_class": label.value}

    @app.post("/v1/correct")
    async def correct(body: dict):
        error_class = None
        if body.get("error_class"):
            try:
                error_class = ErrorClass(body["error_class"])
            except ValueError:
                return JSONResponse(
                    {"error": f"unknown error_class {body['error_class']!r}"},
                    status_code=400,
                )
        try:
            result = correct_two_stage(
                body["text"],
                error_class,
                backends.correct_stage1,
                backends.correct_stage2,
                degrade_on_stage2_failure=backends.degrade_on_stage2_failure,
            )
        except BackendUnavailable as exc:
            return JSONResponse({"error": str(exc), "stage": exc.stage}, status_code=502)
        return {
            "stage1_output": result.stage1_output,
            "stage2_output": result.stage2_output,
            "prompts_used": [p.instruction for p in result.prompts_used],
            "latencies": {
                "correct_stage1": result.stage1_ms,
                "correct_stage2": result.stage2_ms,
            },
        }

    @app.post("/v1/synthesize")
    async def synthesize(body: dict):
        try:
            wav = backends.tts.synthesize(body["text"])
        except BackendUnavailable as exc:
            return JSONResponse({"error": str(exc), "stage": exc.stage}, status_code=502)
        return Response(content=wav, media_type="audio/wav")

    @app.post("/v1/pipeline")
    async def pipeline(request: Request, file: UploadFile | None = None, inline: int = 0):
        try:
            if file is not None:
                data = await file.read()
                fmt = (file.filename or "wav").rsplit(".", 1)[-1]
                trace = run_pipeline(backends, audio_bytes=data, audio_format=fmt)
            else:
                body = await request.json()
                trace = run_pipeline(backends, text=body["text"])
        except (UnsupportedFormat, CorruptStream) as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        except PipelineError as exc:
            return JSONResponse(
                {
                    "error": str(exc),
                    "stage": exc.stage,
                    "trace": exc.trace.to_dict(),
                },
                status_code=502,
            )
        doc = trace.to_dict(include_audio=bool(inline))
        if not inline and trace.audio_out:
            audio_id = uuid.uuid4().hex
            audio_store[audio_id] = trace.audio_out
            doc["audio_out_url"] = f"/v1/audio/{audio_id}"
        return doc

    @app.get("/v1/audio/{audio_id}")
    def fetch_audio(audio_id: str):
        wav = audio_store.get(audio_id)
        if wav is None:
            return JSONResponse({"error": "unknown audio id"}, status_code=404)
        return Response(content=wav, media_type="audio/wav")

    return app


def serve(config: BackendConfig, host: str = "127.0.0.1", port: int = 8000) -> None:
    """Run the service until interrupted; in-flight requests complete
    on shutdown (uvicorn's graceful stop)."""
    import uvicorn

    app = create_app(resolve_backends(config))
    uvicorn.run(app, host=host, port=port)
