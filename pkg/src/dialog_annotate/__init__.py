"""Unsupervised dialogue annotation toolkit.

Annotates dialogues with keywords, redundant utterances and topic
boundaries, driven entirely by precomputed conversational-model scores
(per-token losses and context embeddings) carried in a score bundle file.
Includes rule-based, C99 and TextRank baselines, ratio heuristics for the
annotation hyper-parameters, and keyword/ROUGE evaluation.
"""

from .annotate import (
    ALL_TASKS,
    HParams,
    Task,
    annotate,
    detect_redundant,
    extract_keywords,
    percent_share,
    round_half_up,
    segment_topics,
)
from .baselines import (
    PosTaggedDialogue,
    c99_segment,
    rule_redundant,
    textrank_keywords,
)
from .corpus import (
    AnnotatedDialogue,
    Dialogue,
    KeywordAnnotation,
    KeywordHit,
    RedundancyAnnotation,
    ReferenceSummary,
    TopicAnnotation,
    Utterance,
    load_corpus,
    parse_annotated,
    parse_dialogue,
    render_annotated,
    render_dialogue,
)
from .evaluate import PRF, RougeScore, keyword_prf, rouge_l, rouge_n
from .hparams import (
    CorpusStats,
    Grid,
    compute_stats,
    estimate_r_ke,
    estimate_r_ts,
    grid_search,
)
from .scoring import (
    EOS_MARKER,
    ContextResponsePair,
    ScoreBundle,
    SubwordLossRecord,
    WordLossTable,
    build_pairs,
    build_sequence,
    export_scores,
    import_scores,
    oracle_score,
    utterance_loss,
    word_loss_table,
    word_losses,
)
from .stopwords import STOPWORDS, STOPWORDS_VERSION

__version__ = "0.1.0"

__all__ = [
    "ALL_TASKS",
    "AnnotatedDialogue",
    "ContextResponsePair",
    "CorpusStats",
    "Dialogue",
    "EOS_MARKER",
    "Grid",
    "HParams",
    "KeywordAnnotation",
    "KeywordHit",
    "PRF",
    "PosTaggedDialogue",
    "RedundancyAnnotation",
    "ReferenceSummary",
    "RougeScore",
    "ScoreBundle",
    "SubwordLossRecord",
    "Task",
    "TopicAnnotation",
    "Utterance",
    "WordLossTable",
    "annotate",
    "build_pairs",
    "build_sequence",
    "c99_segment",
    "compute_stats",
    "detect_redundant",
    "estimate_r_ke",
    "estimate_r_ts",
    "export_scores",
    "extract_keywords",
    "grid_search",
    "import_scores",
    "keyword_prf",
    "load_corpus",
    "oracle_score",
    "parse_annotated",
    "parse_dialogue",
    "percent_share",
    "render_annotated",
    "render_dialogue",
    "rouge_l",
    "rouge_n",
    "round_half_up",
    "rule_redundant",
    "segment_topics",
    "STOPWORDS",
    "STOPWORDS_VERSION",
    "textrank_keywords",
    "utterance_loss",
    "word_loss_table",
    "word_losses",
]
