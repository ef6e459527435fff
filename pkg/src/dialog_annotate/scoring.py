"""Scorer contract: loss records, EOS context embeddings, and the score
interchange format.

The model runner and the annotators only meet through :class:`ScoreBundle`.
A bundle carries, per dialogue:

* one :class:`SubwordLossRecord` per response index ``i`` in ``2..|D|``,
  holding the per-subword negative log-likelihoods of response ``i`` given
  utterance ``i-1`` (the last loss position is the end-of-utterance token),
  plus the subword span of each response word;
* one context embedding per utterance: the model state at each
  end-of-utterance marker of the single-sequence pass, representing the
  dialogue prefix up to that utterance.

Word losses are means over a word's subword span; the utterance loss is the
mean over all scored positions including the end marker.

Embeddings are quantized to float32 precision at construction and written as
shortest-round-trip decimals, so export followed by import reproduces any
valid bundle exactly; all similarity arithmetic downstream runs in float64.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .corpus import Dialogue
from .errors import (
    DimensionMismatch,
    IoError,
    MissingRecord,
    NonFiniteValue,
    SchemaError,
    SpanCoverageError,
    TooShort,
    ZeroEmbedding,
)

EOS_MARKER = "<eos>"
SCHEMA_VERSION = 1
ORACLE_DIM = 16


@dataclass(frozen=True)
class ContextResponsePair:
    """Two adjacent utterances: the model's conditioning and target."""

    response_index: int
    context_words: tuple[str, ...]
    response_words: tuple[str, ...]

    def __post_init__(self):
        if self.response_index < 2:
            raise ValueError("response_index must be >= 2")
        if not self.context_words or not self.response_words:
            raise ValueError("context and response must be non-empty")


@dataclass(frozen=True)
class SubwordLossRecord:
    """Per-subword losses for one response plus the word/subword alignment.

    ``subword_losses`` has length L: all response subwords in order, then
    the end-of-utterance loss at position L-1. ``word_spans`` are half-open
    ``(start, end)`` ranges, one per response word, that must tile
    ``[0, L-1)`` in order.
    """

    response_index: int
    subword_losses: tuple[float, ...]
    word_spans: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.response_index < 2:
            raise SchemaError("response_index must be >= 2")
        if len(self.subword_losses) < 2:
            raise SpanCoverageError("record needs at least one subword plus EOS")
        for loss in self.subword_losses:
            if not math.isfinite(loss):
                raise NonFiniteValue(f"non-finite subword loss {loss!r}")
            if loss < 0:
                raise SchemaError(f"negative subword loss {loss!r}")
        if not self.word_spans:
            raise SpanCoverageError("record has no word spans")
        expected_start = 0
        for start, end in self.word_spans:
            if start != expected_start or end <= start:
                raise SpanCoverageError(
                    f"spans must tile [0, {len(self.subword_losses) - 1}) in order"
                )
            expected_start = end
        if expected_start != len(self.subword_losses) - 1:
            raise SpanCoverageError(
                "spans must cover all subwords up to (not including) the EOS loss"
            )

    @property
    def eos_loss(self) -> float:
        return self.subword_losses[-1]


def word_losses(rec: SubwordLossRecord) -> list[tuple[int, float]]:
    """Recover word-level losses: the mean over each word's subword span.

    Returns ``(word_index, loss)`` pairs with 1-based word indices. The EOS
    loss belongs to no word.
    """
    out = []
    for j, (start, end) in enumerate(rec.word_spans, start=1):
        chunk = rec.subword_losses[start:end]
        out.append((j, sum(chunk) / len(chunk)))
    return out


def utterance_loss(rec: SubwordLossRecord) -> float:
    """Mean over all scored positions, end-of-utterance loss included."""
    return sum(rec.subword_losses) / len(rec.subword_losses)


@dataclass(frozen=True)
class UtteranceLosses:
    response_index: int
    word_losses: tuple[tuple[int, float], ...]
    utterance_loss: float


@dataclass(frozen=True)
class WordLossTable:
    """Word- and utterance-level losses for every response in a dialogue."""

    entries: tuple[UtteranceLosses, ...]


def word_loss_table(bundle: "ScoreBundle") -> WordLossTable:
    entries = tuple(
        UtteranceLosses(rec.response_index, tuple(word_losses(rec)), utterance_loss(rec))
        for rec in bundle.records
    )
    return WordLossTable(entries)


@dataclass(frozen=True, eq=False)
class ScoreBundle:
    """All scorer outputs for one dialogue.

    ``eos_embeddings`` is a ``(|D|, dim)`` float64 array whose values are
    exactly representable in float32 (quantized at construction, see module
    docstring). Records are kept sorted by response index, exactly one per
    index in ``2..|D|`` where ``|D|`` is the embedding count.
    """

    dialogue_id: str
    records: tuple[SubwordLossRecord, ...]
    eos_embeddings: np.ndarray
    dim: int

    def __post_init__(self):
        emb = np.asarray(self.eos_embeddings, dtype=np.float64)
        if emb.ndim != 2:
            raise DimensionMismatch("eos_embeddings must be a 2-D array")
        if emb.shape[0] < 1:
            raise SchemaError("bundle needs at least one embedding")
        if emb.shape[1] != self.dim:
            raise DimensionMismatch(
                f"embeddings have length {emb.shape[1]}, declared dim {self.dim}"
            )
        if not np.all(np.isfinite(emb)):
            raise NonFiniteValue(f"{self.dialogue_id}: non-finite embedding component")
        emb = emb.astype(np.float32).astype(np.float64)
        if np.any(np.all(emb == 0.0, axis=1)):
            raise ZeroEmbedding(f"{self.dialogue_id}: zero embedding vector")
        emb.setflags(write=False)
        object.__setattr__(self, "eos_embeddings", emb)

        n = emb.shape[0]
        expected = list(range(2, n + 1))
        got = sorted(rec.response_index for rec in self.records)
        if got != expected:
            missing = sorted(set(expected) - set(got))
            if missing:
                raise MissingRecord(
                    f"{self.dialogue_id}: missing loss records for indices {missing}"
                )
            raise SchemaError(
                f"{self.dialogue_id}: unexpected response indices {got}"
            )
        object.__setattr__(
            self,
            "records",
            tuple(sorted(self.records, key=lambda r: r.response_index)),
        )

    def __eq__(self, other):
        if not isinstance(other, ScoreBundle):
            return NotImplemented
        return (
            self.dialogue_id == other.dialogue_id
            and self.dim == other.dim
            and self.records == other.records
            and np.array_equal(self.eos_embeddings, other.eos_embeddings)
        )

    def utterance_count(self) -> int:
        return self.eos_embeddings.shape[0]

    def record_for(self, response_index: int) -> SubwordLossRecord:
        return self.records[response_index - 2]


# -- dialogue preprocessing --


def build_pairs(d: Dialogue) -> list[ContextResponsePair]:
    """Adjacent-utterance context-response pairs, speakers excluded."""
    if len(d) < 2:
        raise TooShort(f"{d.id}: need at least 2 utterances, got {len(d)}")
    return [
        ContextResponsePair(i, d.utterances[i - 2].words, d.utterances[i - 1].words)
        for i in range(2, len(d) + 1)
    ]


def build_sequence(d: Dialogue) -> list[str]:
    """All words in order with an EOS_MARKER closing each utterance.

    Speaker tokens are excluded here as well; the scorer never sees them.
    """
    stream: list[str] = []
    for utt in d.utterances:
        stream.extend(utt.words)
        stream.append(EOS_MARKER)
    return stream


# -- interchange format --


def _quantize(values: Iterable[float]) -> list[float]:
    return [float(np.float32(v)) for v in values]


def bundle_to_record(bundle: ScoreBundle) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "id": bundle.dialogue_id,
        "dim": bundle.dim,
        "eos_embeddings": [_quantize(row) for row in bundle.eos_embeddings],
        "pairs": [
            {
                "response_index": rec.response_index,
                "subword_losses": list(rec.subword_losses),
                "word_spans": [list(span) for span in rec.word_spans],
            }
            for rec in bundle.records
        ],
    }


def bundle_from_record(rec: dict) -> ScoreBundle:
    if not isinstance(rec, dict):
        raise SchemaError("score record is not an object")
    if rec.get("schema") != SCHEMA_VERSION:
        raise SchemaError(f"unsupported score schema: {rec.get('schema')!r}")
    try:
        rec_id = rec["id"]
        dim = rec["dim"]
        embeddings = rec["eos_embeddings"]
        pairs = rec["pairs"]
    except KeyError as exc:
        raise SchemaError(f"score record missing field {exc}") from exc
    if not isinstance(rec_id, str) or not isinstance(dim, int):
        raise SchemaError("id must be a string and dim an integer")
    if not isinstance(embeddings, list) or not all(
        isinstance(row, list) for row in embeddings
    ):
        raise SchemaError(f"{rec_id}: eos_embeddings must be a list of vectors")
    for row in embeddings:
        if len(row) != dim:
            raise DimensionMismatch(
                f"{rec_id}: embedding of length {len(row)}, expected {dim}"
            )
    if not isinstance(pairs, list):
        raise SchemaError(f"{rec_id}: pairs must be a list")
    records = []
    for pair in pairs:
        try:
            records.append(
                SubwordLossRecord(
                    pair["response_index"],
                    tuple(float(x) for x in pair["subword_losses"]),
                    tuple((int(s), int(e)) for s, e in pair["word_spans"]),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"{rec_id}: malformed pair record: {exc}") from exc
    emb = np.array(embeddings, dtype=np.float64) if embeddings else np.zeros((0, dim))
    return ScoreBundle(rec_id, tuple(records), emb, dim)


def export_scores(bundles: Iterable[ScoreBundle], path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for bundle in bundles:
            fh.write(json.dumps(bundle_to_record(bundle), allow_nan=False))
            fh.write("\n")


def import_scores(path) -> dict[str, ScoreBundle]:
    """Load and validate a score jsonl file, keyed by dialogue id."""
    path = Path(path)
    if not path.is_file():
        raise IoError(f"score file not found: {path}")
    bundles: dict[str, ScoreBundle] = {}
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
            bundle = bundle_from_record(rec)
            if bundle.dialogue_id in bundles:
                raise SchemaError(
                    f"{path}:{lineno}: duplicate score record for "
                    f"{bundle.dialogue_id!r}"
                )
            bundles[bundle.dialogue_id] = bundle
    return bundles


# -- deterministic test scorer --


def _prefix_embedding(seed: int, prefix_words: list[str], dim: int) -> np.ndarray:
    digest = hashlib.blake2b(digest_size=16)
    digest.update(str(seed).encode("utf-8"))
    for word in prefix_words:
        digest.update(b"\x1f")
        digest.update(word.encode("utf-8"))
    rng = np.random.Generator(
        np.random.PCG64(int.from_bytes(digest.digest(), "big"))
    )
    vec = rng.standard_normal(dim)
    return vec / np.linalg.norm(vec)


def oracle_score(d: Dialogue, seed: int) -> ScoreBundle:
    """Deterministic scorer for tests: no model, pure function of input.

    Subword losses are word character lengths (one subword per word) with an
    EOS loss of 1.0. Each context embedding is a unit vector hashed from
    (seed, all words up to and including that utterance), so identical
    prefixes always embed identically.
    """
    if len(d) < 2:
        raise TooShort(f"{d.id}: need at least 2 utterances, got {len(d)}")
    records = []
    for pair in build_pairs(d):
        losses = tuple(float(len(w)) for w in pair.response_words) + (1.0,)
        spans = tuple((j, j + 1) for j in range(len(pair.response_words)))
        records.append(SubwordLossRecord(pair.response_index, losses, spans))
    prefix: list[str] = []
    rows = []
    for utt in d.utterances:
        prefix.extend(utt.words)
        rows.append(_prefix_embedding(seed, prefix, ORACLE_DIM))
    return ScoreBundle(d.id, tuple(records), np.array(rows), ORACLE_DIM)
