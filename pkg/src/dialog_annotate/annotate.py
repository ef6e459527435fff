"""The three loss-driven annotators and their composition.

* Keyword extraction: the top r_ke percent of response words by word loss,
  skipping each utterance's first word (its loss is inflated because the
  opening of a response is the least constrained position).
* Redundancy detection: utterance i is redundant when the context embedding
  barely moves, i.e. cosine(h_{i-1}, h_i) strictly exceeds t_rd. Every
  adjacent pair is compared, scanning from the end of the dialogue back to
  utterance 2.
* Topic segmentation: the top r_ts percent of utterances by utterance loss
  start new topics.

All three read the same immutable ScoreBundle and never observe each
other's output, so any task subset equals the union of single-task runs.
The first utterance carries no loss and has no predecessor; it never
appears in any annotation produced here.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .corpus import (
    AnnotatedDialogue,
    Dialogue,
    KeywordAnnotation,
    KeywordHit,
    RedundancyAnnotation,
    TopicAnnotation,
)
from .errors import BundleMismatch, InvalidHParams, TooShort, ZeroEmbedding
from .scoring import ScoreBundle, utterance_loss, word_losses


class Task(enum.Enum):
    KE = "ke"
    RD = "rd"
    TS = "ts"


ALL_TASKS = frozenset(Task)


@dataclass(frozen=True)
class HParams:
    """Annotation hyper-parameters with their validity ranges."""

    r_ke: float = 15.0
    t_rd: float = 0.99
    r_ts: float = 15.0

    def __post_init__(self):
        if not 0.0 <= self.r_ke <= 100.0:
            raise InvalidHParams(f"r_ke must be in [0, 100], got {self.r_ke}")
        if not 0.0 < self.t_rd <= 1.0:
            raise InvalidHParams(f"t_rd must be in (0, 1], got {self.t_rd}")
        if not 0.0 <= self.r_ts <= 100.0:
            raise InvalidHParams(f"r_ts must be in [0, 100], got {self.r_ts}")

    @classmethod
    def samsum(cls) -> "HParams":
        """Defaults tuned for short chat dialogues."""
        return cls(r_ke=15.0, t_rd=0.99, r_ts=15.0)

    @classmethod
    def ami(cls) -> "HParams":
        """Defaults tuned for long meeting transcripts."""
        return cls(r_ke=4.0, t_rd=0.95, r_ts=5.0)


def round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def percent_share(percent: float, n: int) -> int:
    """How many of n items a percentage selects, rounding halves up."""
    return round_half_up(percent * n / 100.0)


def check_bundle(d: Dialogue, bundle: ScoreBundle) -> None:
    """Raise BundleMismatch unless the bundle aligns with the dialogue."""
    if len(d) < 2:
        raise TooShort(f"{d.id}: annotators need at least 2 utterances")
    if bundle.dialogue_id != d.id:
        raise BundleMismatch(
            f"bundle is for {bundle.dialogue_id!r}, dialogue is {d.id!r}"
        )
    if bundle.utterance_count() != len(d):
        raise BundleMismatch(
            f"{d.id}: bundle covers {bundle.utterance_count()} utterances, "
            f"dialogue has {len(d)}"
        )
    for rec in bundle.records:
        n_words = len(d.utterances[rec.response_index - 1].words)
        if len(rec.word_spans) != n_words:
            raise BundleMismatch(
                f"{d.id}: utterance {rec.response_index} has {n_words} words "
                f"but {len(rec.word_spans)} spans"
            )


def extract_keywords(d: Dialogue, s: ScoreBundle, r_ke: float) -> KeywordAnnotation:
    """Select the top r_ke percent of candidate words by loss as keywords.

    Candidates are all response words (utterances 2..|D|) minus each
    utterance's first word. The selection counts word instances; surfaces
    are deduplicated case-insensitively afterwards, keeping the
    highest-loss occurrence. Speaker names are prepended, not counted
    against the budget.
    """
    if not 0.0 <= r_ke <= 100.0:
        raise InvalidHParams(f"r_ke must be in [0, 100], got {r_ke}")
    check_bundle(d, s)
    pool: list[tuple[float, int, int, str]] = []
    for rec in s.records:
        utt = d.utterances[rec.response_index - 1]
        for word_index, loss in word_losses(rec):
            if word_index == 1:
                continue
            pool.append((loss, rec.response_index, word_index, utt.words[word_index - 1]))
    k = percent_share(r_ke, len(pool))
    selected = sorted(pool, key=lambda t: (-t[0], t[1], t[2]))[:k]
    seen: set[str] = set()
    hits: list[KeywordHit] = []
    for loss, utt_index, word_index, surface in selected:
        folded = surface.casefold()
        if folded in seen:
            continue
        seen.add(folded)
        hits.append(KeywordHit(surface, loss, utt_index, word_index))
    return KeywordAnnotation(
        speakers=d.speakers_in_order(),
        keywords=tuple(hit.surface for hit in hits),
        details=tuple(hits),
    )


def _cosine(u: np.ndarray, v: np.ndarray) -> float:
    nu = float(np.dot(u, u)) ** 0.5
    nv = float(np.dot(v, v)) ** 0.5
    if nu == 0.0 or nv == 0.0:
        raise ZeroEmbedding("cosine similarity undefined for the zero vector")
    return float(np.dot(u, v)) / (nu * nv)


def detect_redundant(d: Dialogue, s: ScoreBundle, t_rd: float) -> RedundancyAnnotation:
    """Mark utterance i redundant when cosine(h_{i-1}, h_i) > t_rd.

    The scan walks from the last utterance down to utterance 2 and always
    compares against the immediately preceding context embedding,
    regardless of earlier detections.
    """
    if not 0.0 < t_rd <= 1.0:
        raise InvalidHParams(f"t_rd must be in (0, 1], got {t_rd}")
    check_bundle(d, s)
    emb = s.eos_embeddings
    indices = set()
    for i in range(len(d), 1, -1):
        if _cosine(emb[i - 2], emb[i - 1]) > t_rd:
            indices.add(i)
    return RedundancyAnnotation(frozenset(indices))


def segment_topics(d: Dialogue, s: ScoreBundle, r_ts: float) -> TopicAnnotation:
    """Mark the top r_ts percent of utterances by utterance loss as topic
    starts, earlier utterances winning ties."""
    if not 0.0 <= r_ts <= 100.0:
        raise InvalidHParams(f"r_ts must be in [0, 100], got {r_ts}")
    check_bundle(d, s)
    scored = [(utterance_loss(rec), rec.response_index) for rec in s.records]
    k = percent_share(r_ts, len(scored))
    chosen = sorted(scored, key=lambda t: (-t[0], t[1]))[:k]
    return TopicAnnotation(frozenset(index for _, index in chosen))


def annotate(
    d: Dialogue,
    s: ScoreBundle,
    h: HParams,
    tasks: Iterable[Task] = ALL_TASKS,
) -> AnnotatedDialogue:
    """Run the requested annotators independently and attach their outputs."""
    tasks = frozenset(tasks)
    check_bundle(d, s)
    keywords = extract_keywords(d, s, h.r_ke) if Task.KE in tasks else None
    redundant = detect_redundant(d, s, h.t_rd) if Task.RD in tasks else None
    topics = segment_topics(d, s, h.r_ts) if Task.TS in tasks else None
    return AnnotatedDialogue(d, keywords=keywords, redundant=redundant, topics=topics)
