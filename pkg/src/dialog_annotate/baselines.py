"""Comparison methods: rule-based redundancy, C99 segmentation, TextRank.

These share output types with the loss-based annotators so the evaluators
and file formats are interchangeable. The C99 sentence vectors come from
whatever embedding file the caller supplies (typically the score bundle's
context embeddings); nothing here touches a model.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _kernels
from .corpus import Dialogue, RedundancyAnnotation, TopicAnnotation
from .errors import (
    DimensionMismatch,
    IoError,
    MalformedRecord,
    TagCountMismatch,
    ZeroEmbedding,
)
from .stopwords import STOPWORDS

POS_LABELS = ("NOUN", "VERB", "ADJ", "OTHER")
CONTENT_LABELS = frozenset({"NOUN", "VERB", "ADJ"})

# Choi's recommended parameters: an 11x11 local rank mask and a gradient
# cutoff of mean + 1.2 * std for the automatic stop.
C99_RANK_HALF = 5
C99_STD_COEFF = 1.2

TEXTRANK_WINDOW = 4
TEXTRANK_DAMPING = 0.85
TEXTRANK_TOL = 1e-6
TEXTRANK_MAX_ITER = 100


@dataclass(frozen=True)
class PosTaggedDialogue:
    """A dialogue with one coarse POS label per word."""

    dialogue: Dialogue
    tags: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        if len(self.tags) != len(self.dialogue):
            raise TagCountMismatch(
                f"{self.dialogue.id}: {len(self.tags)} tag rows for "
                f"{len(self.dialogue)} utterances"
            )
        for utt, row in zip(self.dialogue.utterances, self.tags):
            if len(row) != len(utt.words):
                raise TagCountMismatch(
                    f"{self.dialogue.id}: utterance {utt.index} has "
                    f"{len(utt.words)} words but {len(row)} tags"
                )
            for tag in row:
                if tag not in POS_LABELS:
                    raise ValueError(f"unknown POS label {tag!r}")


def rule_redundant(p: PosTaggedDialogue) -> RedundancyAnnotation:
    """Mark utterances containing no noun, verb or adjective as redundant.

    Unlike the loss-based detector, this rule may mark the first utterance.
    """
    indices = frozenset(
        utt.index
        for utt, row in zip(p.dialogue.utterances, p.tags)
        if not any(tag in CONTENT_LABELS for tag in row)
    )
    return RedundancyAnnotation(indices)


def load_pos_tags(path) -> dict[str, tuple[tuple[str, ...], ...]]:
    """Read the POS jsonl format: ``{"id": str, "tags": [[str,...],...]}``."""
    path = Path(path)
    if not path.is_file():
        raise IoError(f"POS file not found: {path}")
    out: dict[str, tuple[tuple[str, ...], ...]] = {}
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                rec_id = rec["id"]
                tags = tuple(tuple(str(t) for t in row) for row in rec["tags"])
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise MalformedRecord(f"{path}:{lineno}: {exc}") from exc
            out[rec_id] = tags
    return out


# -- C99 --


def _cosine_matrix(vectors: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(vectors, axis=1)
    if np.any(norms == 0.0):
        raise ZeroEmbedding("zero sentence vector")
    unit = vectors / norms[:, None]
    sim = unit @ unit.T
    return np.clip(sim, -1.0, 1.0)


class _Segmentation:
    """Sorted split positions over [0, n) with O(1) inside-density updates.

    A split at position i separates i from i+1. Segment sums come from the
    2-D prefix sums of the rank matrix.
    """

    def __init__(self, rank: np.ndarray):
        self.n = rank.shape[0]
        self._prefix = rank.cumsum(axis=0).cumsum(axis=1)
        self.splits: list[int] = []
        self.sum_tot = self._block(0, self.n - 1)
        self.sum_area = float(self.n * self.n)

    def _block(self, lo: int, hi: int) -> float:
        p = self._prefix
        total = p[hi, hi]
        if lo > 0:
            total -= p[lo - 1, hi] + p[hi, lo - 1] - p[lo - 1, lo - 1]
        return float(total)

    def density(self) -> float:
        return self.sum_tot / self.sum_area

    def _segments(self) -> list[tuple[int, int]]:
        edges = [0] + [s + 1 for s in self.splits] + [self.n]
        return [(edges[k], edges[k + 1] - 1) for k in range(len(edges) - 1)]

    def _pair_stats(self, lo: int, hi: int, i: int) -> tuple[float, float]:
        """Sum and area of [lo, i] plus [i+1, hi]."""
        tot = self._block(lo, i) + self._block(i + 1, hi)
        area = (i - lo + 1) ** 2 + (hi - i) ** 2
        return tot, float(area)

    def add_best_split(self) -> bool:
        """Insert the split that maximizes the global density; False when
        every segment is a single position."""
        best = (-np.inf, -1)
        for lo, hi in self._segments():
            if lo == hi:
                continue
            seg_tot = self._block(lo, hi)
            seg_area = float((hi - lo + 1) ** 2)
            for i in range(lo, hi):
                tot, area = self._pair_stats(lo, hi, i)
                density = (self.sum_tot - seg_tot + tot) / (
                    self.sum_area - seg_area + area
                )
                if density > best[0]:
                    best = (density, i)
        if best[1] < 0:
            return False
        self._apply_move(None, best[1])
        return True

    def refine(self, max_sweeps: int = 50) -> None:
        """Coordinate ascent: re-optimize each split between its neighbours
        until no move strictly improves the density. The one-step greedy
        choice sits on a noisy plateau around block edges; this recovers the
        jointly best positions.

        Every candidate, the current position included, is scored with the
        same arithmetic, so a move happens only when a position strictly
        beats the incumbent under one consistent evaluation.
        """
        for _ in range(max_sweeps):
            changed = False
            for j, current in enumerate(list(self.splits)):
                lo = self.splits[j - 1] + 1 if j > 0 else 0
                hi = self.splits[j + 1] - 1 if j + 1 < len(self.splits) else self.n - 1
                cur_tot, cur_area = self._pair_stats(lo, hi, current)
                base_tot = self.sum_tot - cur_tot
                base_area = self.sum_area - cur_area
                best_density = (base_tot + cur_tot) / (base_area + cur_area)
                best_i = current
                for i in range(lo, hi):
                    if i == current:
                        continue
                    tot, area = self._pair_stats(lo, hi, i)
                    density = (base_tot + tot) / (base_area + area)
                    if density > best_density:
                        best_density, best_i = density, i
                if best_i != current:
                    self._apply_move(current, best_i)
                    changed = True
            if not changed:
                return

    def _apply_move(self, old: int | None, new: int) -> None:
        splits = [s for s in self.splits if s != old] if old is not None else list(
            self.splits
        )
        splits.append(new)
        splits.sort()
        self.splits = splits
        edges = [0] + [s + 1 for s in splits] + [self.n]
        self.sum_tot = sum(
            self._block(edges[k], edges[k + 1] - 1) for k in range(len(edges) - 1)
        )
        self.sum_area = float(
            sum((edges[k + 1] - edges[k]) ** 2 for k in range(len(edges) - 1))
        )


def c99_segment(
    sentence_vectors,
    target_boundaries: int | None = None,
    std_coeff: float = C99_STD_COEFF,
) -> TopicAnnotation:
    """Divisive C99 segmentation over sentence vectors.

    Cosine similarities are rank-transformed with an 11x11 mask (clipped at
    the matrix edges), then segments are split divisively to maximize the
    inside density (rank mass inside segments over their squared sizes),
    each greedy split followed by a coordinate-ascent refinement of all
    boundary positions. With ``target_boundaries`` the process stops after
    that many splits; otherwise splits whose density gain stands out from
    the gain profile (strictly above mean + std_coeff * std) are kept, up
    to the last such split.

    Returns boundaries as 1-based indices of the position starting each new
    segment.
    """
    try:
        vectors = np.asarray(sentence_vectors, dtype=np.float64)
    except ValueError as exc:
        raise DimensionMismatch(f"sentence vectors of unequal lengths: {exc}") from exc
    if vectors.ndim != 2:
        raise DimensionMismatch("sentence vectors must form a 2-D array")
    n = vectors.shape[0]
    if n < 2:
        raise ValueError("need at least 2 sentence vectors")
    if target_boundaries is not None and not 0 <= target_boundaries <= n - 1:
        raise ValueError(
            f"target_boundaries must be in [0, {n - 1}], got {target_boundaries}"
        )
    if np.any(np.linalg.norm(vectors, axis=1) == 0.0):
        raise ZeroEmbedding("zero sentence vector")
    if target_boundaries == 0:
        return TopicAnnotation(frozenset())

    sim = _cosine_matrix(vectors)
    rank = _kernels.rank_matrix(sim, C99_RANK_HALF)
    seg = _Segmentation(rank)

    max_splits = target_boundaries if target_boundaries is not None else n - 1
    densities = [seg.density()]
    snapshots: list[tuple[int, ...]] = [()]
    while len(seg.splits) < max_splits and seg.add_best_split():
        seg.refine()
        densities.append(seg.density())
        snapshots.append(tuple(seg.splits))

    if target_boundaries is not None:
        chosen = snapshots[-1]
    else:
        gains = np.diff(np.array(densities))
        cutoff = gains.mean() + std_coeff * gains.std()
        above = np.nonzero(gains > cutoff)[0]
        chosen = snapshots[above.max() + 1] if above.size else ()

    return TopicAnnotation(frozenset(i + 2 for i in chosen))


# -- TextRank --


def textrank_keywords(
    d: Dialogue, k: int, stopwords: frozenset[str] = STOPWORDS
) -> list[str]:
    """Top-k words by PageRank over a co-occurrence graph.

    Nodes are lowercased non-stopword words; two words are linked when they
    appear within a window of 4 tokens in the stopword-filtered word
    sequence of an utterance. Scores follow the damped update
    ``s_i = (1 - d) + d * sum_j s_j / deg_j`` with isolated words treated
    as dangling mass spread uniformly, so scores always sum to the node
    count. Ties rank by first occurrence; surfaces keep their
    first-occurrence casing.
    """
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    node_of: dict[str, int] = {}
    first_surface: list[str] = []
    sequences: list[list[int]] = []
    for utt in d.utterances:
        seq = []
        for word in utt.words:
            key = word.lower()
            if key in stopwords:
                continue
            if key not in node_of:
                node_of[key] = len(first_surface)
                first_surface.append(word)
            seq.append(node_of[key])
        sequences.append(seq)
    n = len(first_surface)
    if n == 0 or k == 0:
        return []

    neighbors: list[set[int]] = [set() for _ in range(n)]
    for seq in sequences:
        for i in range(len(seq)):
            for j in range(i + 1, min(i + TEXTRANK_WINDOW, len(seq))):
                if seq[i] != seq[j]:
                    neighbors[seq[i]].add(seq[j])
                    neighbors[seq[j]].add(seq[i])

    adjacency = np.zeros((n, n))
    for i, adj in enumerate(neighbors):
        for j in adj:
            adjacency[j, i] = 1.0
    degree = adjacency.sum(axis=0)
    dangling = degree == 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        transition = np.where(degree > 0, adjacency / degree, 0.0)

    scores = np.ones(n)
    for _ in range(TEXTRANK_MAX_ITER):
        spread = transition @ scores + scores[dangling].sum() / n
        new_scores = (1.0 - TEXTRANK_DAMPING) + TEXTRANK_DAMPING * spread
        delta = np.abs(new_scores - scores).max()
        scores = new_scores
        if delta < TEXTRANK_TOL:
            break

    order = sorted(range(n), key=lambda i: (-scores[i], i))
    return [first_surface[i] for i in order[:k]]
