"""Model runner for the dialog-annotate toolkit: score bundles and POS tags."""

from .corpus_io import DialogueRecord, load_corpus, parse_dialogue_block
from .postag import pos_tag_corpus, tag_dialogue, tag_word
from .scorer import (
    AlignmentError,
    RunnerConfig,
    encode_words,
    load_model,
    score_corpus,
    score_dialogue,
)

__version__ = "0.1.0"
