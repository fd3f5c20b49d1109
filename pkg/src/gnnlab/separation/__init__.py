"""Empirical separating-power comparisons on graph-pair corpora."""

from gnnlab.separation.corpus import (
    Corpus,
    CorpusPair,
    build_corpus,
    export_corpus,
    load_corpus_dir,
    resolve_corpus,
)
from gnnlab.separation.hard_pairs import HARD_PAIRS, get_hard_pair
from gnnlab.separation.report import (
    SeparationReport,
    SeparationRow,
    assert_sound,
    check_inclusion,
    completeness_rate,
    default_template,
    gnn_separation_report,
    wl_separation_report,
)

__all__ = [
    "HARD_PAIRS",
    "Corpus",
    "CorpusPair",
    "SeparationReport",
    "SeparationRow",
    "assert_sound",
    "build_corpus",
    "check_inclusion",
    "completeness_rate",
    "default_template",
    "export_corpus",
    "get_hard_pair",
    "gnn_separation_report",
    "load_corpus_dir",
    "resolve_corpus",
    "wl_separation_report",
]
