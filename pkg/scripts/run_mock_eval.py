#!/usr/bin/env python3
"""End-to-end mock evaluation: forge a corpus, split it, run the
correction pipeline with oracle classifier + repair corrector, and
print the Metric/Score table.

Usage: python3 scripts/run_mock_eval.py [--per-class 250] [--seed 0]
"""

import argparse
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))
from conftest import make_sentence  # noqa: E402

from sinassist.config import RoleConfig, mock_config, resolve_backends
from sinassist.forge import ForgeConfig, forge_corpus, stratified_split
from sinassist.metrics import build_report, report_table
from sinassist.pipeline import run_pipeline


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--per-class", type=int, default=250)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    clean = [(f"utt{i:05d}", make_sentence(rng), None) for i in range(args.per_class * 2)]
    corpus = forge_corpus(clean, ForgeConfig(per_class_count=args.per_class, seed=args.seed))
    train, test = stratified_split(corpus, 0.8, seed=args.seed)
    print(f"forged {len(corpus)} samples; {len(train)} train / {len(test)} test")

    backends = resolve_backends(
        mock_config(
            classifier=RoleConfig(kind="mock-oracle"),
            correct_stage1=RoleConfig(kind="mock-repair"),
        ),
        samples=corpus,
    )
    pairs = []
    total_ms = 0.0
    for sample in test:
        trace = run_pipeline(backends, text=sample.corrupted)
        pairs.append((sample.original, trace.stage2_output))
        total_ms += trace.latencies["total"].ms
    report = build_report(pairs, label="correction (oracle + repair mocks)")
    print(report_table(report))
    print(f"mean pipeline latency: {total_ms / len(test):.2f} ms over {len(test)} runs")
    return 0


if __name__ == "__main__":
    sys.exit(main())
