"""Sinhala dyslexia-assistance pipeline toolkit."""

from .diagnosis import Diagnosis, ErrorClass, Prompt, Verdict, build_prompt, diagnose
from .forge import (
    CorpusSample,
    ForgeConfig,
    InjectionTrace,
    forge_corpus,
    inject_error,
    read_corpus,
    stratified_split,
    write_corpus,
)
from .metrics import (
    EditScript,
    EvaluationReport,
    WerBreakdown,
    align,
    bleu,
    build_report,
    corpus_wer,
    exact_match_accuracy,
    gleu,
    mean_edit_distance,
    wer,
)
from .text import SinhalaText, normalize, segment_clusters, tokenize_words

__version__ = "0.1.0"
