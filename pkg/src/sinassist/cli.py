"""Operator command line: forge, split, evaluate, run, report, serve.

Exit codes: 0 success, 2 input/config error, 3 backend failure.
All files are UTF-8 line-delimited JSON.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .backends import MockSTT
from .config import ConfigError, ResolvedBackends, load_config, resolve_backends
from .correction import BackendUnavailable, correct_two_stage
from .forge import (
    CLASS_ORDER,
    CorpusFormatError,
    CorpusSample,
    EmptyClass,
    ForgeConfig,
    InsufficientSourceData,
    build_confusion_table,
    forge_corpus,
    read_corpus,
    stratified_split,
    write_corpus,
)
from .metrics import EmptyReference, build_report, render_table, report_table
from .pipeline import PipelineError, run_pipeline

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BACKEND = 3


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _read_sentences(path: str) -> list[tuple[str, str, str | None]]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CliError(f"{path}:{line_no}: invalid JSON: {exc}")
            if "id" not in rec or "text" not in rec:
                raise CliError(f"{path}:{line_no}: need fields id and text")
            rows.append((rec["id"], rec["text"], rec.get("audio_path")))
    return rows


def _print_class_counts(samples: list[CorpusSample]) -> None:
    for cls in CLASS_ORDER:
        count = sum(1 for s in samples if s.error_class is cls)
        print(f"  {cls.value}: {count}")


def cmd_forge(args: argparse.Namespace) -> int:
    sentences = _read_sentences(args.input)
    table = build_confusion_table()
    if args.confusion_table:
        with open(args.confusion_table, encoding="utf-8") as fh:
            pairs = [tuple(p) for p in json.load(fh)]
        table = build_confusion_table(pairs)
    config = ForgeConfig(
        per_class_count=args.per_class, seed=args.seed, confusion_table=table
    )
    try:
        samples = forge_corpus(sentences, config)
    except InsufficientSourceData as exc:
        raise CliError(str(exc))
    write_corpus(samples, args.out)
    print(f"forged {len(samples)} samples -> {args.out}")
    _print_class_counts(samples)
    return EXIT_OK


def cmd_split(args: argparse.Namespace) -> int:
    corpus = read_corpus(getattr(args, "in"))
    try:
        train, test = stratified_split(corpus, args.ratio, args.seed)
    except (EmptyClass, ValueError) as exc:
        raise CliError(str(exc))
    write_corpus(train, args.train_out)
    write_corpus(test, args.test_out)
    print(f"train: {len(train)} -> {args.train_out}")
    _print_class_counts(train)
    print(f"test: {len(test)} -> {args.test_out}")
    _print_class_counts(test)
    return EXIT_OK


def _read_results(path: str) -> list[dict]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rows.append((line_no, json.loads(line)))
            except json.JSONDecodeError as exc:
                raise CliError(f"{path}:{line_no}: invalid JSON: {exc}")
    return rows


def cmd_evaluate(args: argparse.Namespace) -> int:
    rows = _read_results(getattr(args, "in"))
    if not rows:
        raise CliError(f"{getattr(args, 'in')}: no result rows")
    pairs = []
    for line_no, rec in rows:
        if rec.get("error"):
            continue  # failed rows carry no hypothesis
        for field in (args.ref_field, args.hyp_field):
            if field not in rec:
                raise CliError(f"row {line_no}: missing field {field!r}")
        pairs.append((rec[args.ref_field], rec[args.hyp_field]))
    if not pairs:
        raise CliError("all rows failed; nothing to evaluate", code=EXIT_BACKEND)
    try:
        report = build_report(pairs, label=args.label, granularity=args.granularity)
    except EmptyReference as exc:
        raise CliError(str(exc))
    with open(args.report, "w", encoding="utf-8") as fh:
        fh.write(report.to_json() + "\n")
    print(report_table(report), end="")
    return EXIT_OK


def _stt_hypothesis(sample: CorpusSample, backends: ResolvedBackends) -> str:
    stt = backends.stt
    if isinstance(stt, MockSTT):
        if sample.audio_path and sample.audio_path in stt.transcript_map:
            return stt.transcribe(None, audio_ref=sample.audio_path)
        # no sidecar transcript: the mock "hears" the original sentence
        return stt.transcribe_text(sample.original)
    if not sample.audio_path:
        raise BackendUnavailable("stt", f"sample {sample.id} has no audio_path")
    from .audio import preprocess_audio

    data = Path(sample.audio_path).read_bytes()
    fmt = sample.audio_path.rsplit(".", 1)[-1]
    return stt.transcribe(preprocess_audio(data, fmt), audio_ref=sample.audio_path)


def _run_one(sample: CorpusSample, backends: ResolvedBackends, measure: str) -> dict:
    row: dict = {
        "id": sample.id,
        "reference": sample.original,
        "error_class_gold": sample.error_class.value,
    }
    try:
        if measure == "stt":
            transcript = _stt_hypothesis(sample, backends)
            row["transcript"] = transcript
            row["hypothesis"] = transcript
        else:
            if measure == "pipeline":
                transcript = _stt_hypothesis(sample, backends)
            else:  # correction: start from the corrupted text directly
                transcript = sample.corrupted
            error_class = None
            if backends.classifier is not None:
                try:
                    error_class = backends.classifier.classify(transcript)
                except BackendUnavailable:
                    error_class = None
            result = correct_two_stage(
                transcript,
                error_class,
                backends.correct_stage1,
                backends.correct_stage2,
                degrade_on_stage2_failure=backends.degrade_on_stage2_failure,
            )
            row["transcript"] = transcript
            row["hypothesis"] = result.stage2_output
            row["error_class_pred"] = error_class.value if error_class else None
            row["latencies"] = {
                "correct_stage1": result.stage1_ms,
                "correct_stage2": result.stage2_ms,
            }
    except (BackendUnavailable, PipelineError) as exc:
        row["error"] = str(exc)
    return row


def cmd_run(args: argparse.Namespace) -> int:
    samples = sorted(read_corpus(args.corpus), key=lambda s: s.id)
    if not samples:
        raise CliError(f"{args.corpus}: empty corpus")
    try:
        config = load_config(args.config)
        backends = resolve_backends(config, samples=samples)
    except (ConfigError, OSError) as exc:
        raise CliError(str(exc))

    failed = 0
    with open(args.out, "w", encoding="utf-8") as fh:
        if args.jobs > 1:
            with ThreadPoolExecutor(max_workers=args.jobs) as pool:
                rows = pool.map(lambda s: _run_one(s, backends, args.measure), samples)
                for row in rows:
                    failed += 1 if row.get("error") else 0
                    fh.write(json.dumps(row, ensure_ascii=False) + "\n")
        else:
            for sample in samples:
                row = _run_one(sample, backends, args.measure)
                failed += 1 if row.get("error") else 0
                fh.write(json.dumps(row, ensure_ascii=False) + "\n")
    print(f"{len(samples) - failed}/{len(samples)} samples succeeded -> {args.out}")
    if failed == len(samples):
        raise CliError("all samples failed", code=EXIT_BACKEND)
    return EXIT_OK


def _report_sections(doc) -> list[tuple[str, dict]]:
    entries = doc if isinstance(doc, list) else [doc]
    sections = []
    for entry in entries:
        scores = entry.get("metrics", entry)
        sections.append(
            (
                entry.get("label", "module"),
                {
                    k: scores[k]
                    for k in ("bleu", "gleu", "accuracy", "wer", "edit_distance")
                    if k in scores
                },
            )
        )
    return sections


def cmd_report(args: argparse.Namespace) -> int:
    with open(args.results, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CliError(f"{args.results}: invalid JSON: {exc}")
    if args.format == "json":
        print(json.dumps(doc, ensure_ascii=False, indent=2))
    else:
        print(render_table(_report_sections(doc)), end="")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    from .service import serve

    try:
        config = load_config(args.config)
    except (ConfigError, OSError) as exc:
        raise CliError(str(exc))
    serve(config, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sinassist")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("forge", help="forge a synthetic error corpus")
    p.add_argument("--input", required=True, help="JSONL of {id, text, audio_path?}")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--per-class", type=int, default=750)
    p.add_argument("--confusion-table", help="JSON list of consonant pairs")
    p.set_defaults(func=cmd_forge)

    p = sub.add_parser("split", help="stratified train/test split")
    p.add_argument("--in", required=True)
    p.add_argument("--train-out", required=True)
    p.add_argument("--test-out", required=True)
    p.add_argument("--ratio", type=float, default=0.8)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("evaluate", help="compute metrics over a results file")
    p.add_argument("--in", required=True)
    p.add_argument("--report", required=True, help="JSON report output path")
    p.add_argument("--ref-field", default="reference")
    p.add_argument("--hyp-field", default="hypothesis")
    p.add_argument("--granularity", choices=("word", "cluster"), default="word")
    p.add_argument("--label", default="module")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("run", help="batch-run samples through backends")
    p.add_argument("--corpus", required=True)
    p.add_argument("--config", required=True)
    p.add_argument("--measure", choices=("stt", "correction", "pipeline"), required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("report", help="render a report or fixture file")
    p.add_argument("--results", required=True)
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--config", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (CorpusFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
