"""Shared generators and brute-force oracles for the test suite."""

import random
import string

import numpy as np
import pytest

from dialog_annotate import _kernels
from dialog_annotate.corpus import (
    AnnotatedDialogue,
    Dialogue,
    KeywordAnnotation,
    RedundancyAnnotation,
    TopicAnnotation,
    Utterance,
)
from dialog_annotate.scoring import ScoreBundle, SubwordLossRecord

WORD_ALPHABET = string.ascii_lowercase


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Trigger JIT compilation outside any timed test body."""
    _kernels.lcs_length(np.array([1, 2], dtype=np.int64), np.array([2], dtype=np.int64))
    _kernels.rank_matrix(np.eye(4), 5)


def make_dialogue(rng: random.Random, n_utterances=None, max_words=5) -> Dialogue:
    n = n_utterances or rng.randint(2, 12)
    speakers = ["Ann", "Bob", "Cleo"]
    utterances = []
    for i in range(1, n + 1):
        words = tuple(
            "".join(rng.choices(WORD_ALPHABET, k=rng.randint(1, 7)))
            for _ in range(rng.randint(1, max_words))
        )
        utterances.append(
            Utterance(i, rng.choice(speakers), words, " ".join(words))
        )
    return Dialogue(f"d{rng.randrange(10 ** 9)}", tuple(utterances))


def make_bundle(
    rng: random.Random,
    d: Dialogue,
    dim: int = 4,
    loss_choices=(0.0, 0.5, 1.0, 1.5, 2.0, 2.5),
) -> ScoreBundle:
    """Random bundle for a dialogue: one subword per word, so word losses
    equal subword losses. Discrete loss values make ties common."""
    records = []
    for i in range(2, len(d) + 1):
        words = d.utterances[i - 1].words
        losses = tuple(rng.choice(loss_choices) for _ in words) + (
            rng.choice(loss_choices),
        )
        spans = tuple((j, j + 1) for j in range(len(words)))
        records.append(SubwordLossRecord(i, losses, spans))
    emb = np.array(
        [[rng.gauss(0.0, 1.0) for _ in range(dim)] for _ in range(len(d))]
    )
    emb /= np.linalg.norm(emb, axis=1, keepdims=True)
    return ScoreBundle(d.id, tuple(records), emb, dim)


def make_split_bundle(rng: random.Random, d: Dialogue, dim: int = 4) -> ScoreBundle:
    """Bundle whose words split into 1..3 subwords with continuous losses."""
    records = []
    for i in range(2, len(d) + 1):
        words = d.utterances[i - 1].words
        losses = []
        spans = []
        for _ in words:
            n_sub = rng.randint(1, 3)
            start = len(losses)
            losses.extend(rng.uniform(0.0, 8.0) for _ in range(n_sub))
            spans.append((start, start + n_sub))
        losses.append(rng.uniform(0.0, 8.0))
        records.append(SubwordLossRecord(i, tuple(losses), tuple(spans)))
    emb = np.array(
        [[rng.gauss(0.0, 1.0) for _ in range(dim)] for _ in range(len(d))]
    )
    emb /= np.linalg.norm(emb, axis=1, keepdims=True)
    return ScoreBundle(d.id, tuple(records), emb, dim)


def make_annotated(rng: random.Random, d: Dialogue) -> AnnotatedDialogue:
    """Random renderable annotation, biased to exercise tag co-occurrence."""
    n = len(d)
    keywords = None
    if rng.random() < 0.7:
        pool = sorted({w for u in d.utterances for w in u.words})
        count = rng.randint(0, min(4, len(pool)))
        keywords = KeywordAnnotation(
            d.speakers_in_order(), tuple(rng.sample(pool, count))
        )
    redundant = frozenset(
        i for i in range(1, n + 1) if rng.random() < 0.4
    )
    topics = frozenset(i for i in range(2, n + 1) if rng.random() < 0.4)
    return AnnotatedDialogue(
        d,
        keywords=keywords,
        redundant=RedundancyAnnotation(redundant),
        topics=TopicAnnotation(topics),
    )


# -- independent oracles --


def brute_force_redundant(bundle: ScoreBundle, t_rd: float) -> frozenset:
    """Evaluate every adjacent cosine with plain Python float arithmetic."""
    import math

    emb = bundle.eos_embeddings
    out = set()
    for i in range(2, emb.shape[0] + 1):
        u = [float(x) for x in emb[i - 2]]
        v = [float(x) for x in emb[i - 1]]
        cos = math.fsum(a * b for a, b in zip(u, v)) / (
            math.sqrt(math.fsum(a * a for a in u))
            * math.sqrt(math.fsum(b * b for b in v))
        )
        if cos > t_rd:
            out.add(i)
    return frozenset(out)


def brute_force_round_half_up(numer: int, denom: int) -> int:
    """round_half_up(numer/denom) in exact integer arithmetic."""
    from fractions import Fraction

    x = Fraction(numer, denom) + Fraction(1, 2)
    return x.numerator // x.denominator


def brute_force_keywords(d: Dialogue, bundle: ScoreBundle, r_ke: float):
    """Repeated max-extraction over the candidate pool, then first-keep dedup."""
    pool = []
    for rec in bundle.records:
        words = d.utterances[rec.response_index - 1].words
        for j, (start, end) in enumerate(rec.word_spans, start=1):
            if j == 1:
                continue
            chunk = rec.subword_losses[start:end]
            pool.append(
                (sum(chunk) / len(chunk), rec.response_index, j, words[j - 1])
            )
    k = brute_force_round_half_up(int(round(r_ke * len(pool))), 100)
    remaining = list(pool)
    picked = []
    for _ in range(k):
        best = None
        for item in remaining:
            if best is None:
                best = item
            elif item[0] > best[0]:
                best = item
            elif item[0] == best[0] and (item[1], item[2]) < (best[1], best[2]):
                best = item
        picked.append(best)
        remaining.remove(best)
    surfaces = []
    seen = set()
    for _, _, _, surface in picked:
        if surface.casefold() not in seen:
            seen.add(surface.casefold())
            surfaces.append(surface)
    return tuple(surfaces)


def brute_force_topics(bundle: ScoreBundle, r_ts: float) -> frozenset:
    """Repeated max-extraction over utterance losses."""
    scored = []
    for rec in bundle.records:
        scored.append(
            (sum(rec.subword_losses) / len(rec.subword_losses), rec.response_index)
        )
    k = brute_force_round_half_up(int(round(r_ts * len(scored))), 100)
    remaining = list(scored)
    out = set()
    for _ in range(k):
        best = None
        for item in remaining:
            if best is None or item[0] > best[0]:
                best = item
            elif item[0] == best[0] and item[1] < best[1]:
                best = item
        out.add(best[1])
        remaining.remove(best)
    return frozenset(out)
