"""Keyword precision/recall/F1 against reference summaries, and ROUGE-1/2/L.

Keyword scoring treats the reference summary's words as the gold keyword
set. Both sides are normalized the same way before set comparison:
lowercase, punctuation characters removed, stopwords dropped, duplicates
collapsed.

The ROUGE here is for desk-scale regression inside this toolkit. It uses a
fixed tokenization (lowercase, strip punctuation, whitespace split), no
stemming and single references; parity with any official scorer package is
not claimed.
"""

from __future__ import annotations

import string
from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .corpus import ReferenceSummary
from .stopwords import STOPWORDS

_PUNCT_TABLE = str.maketrans("", "", string.punctuation)


@dataclass(frozen=True)
class PRF:
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class RougeScore:
    variant: str
    precision: float
    recall: float
    f1: float


def _f1(p: float, r: float) -> float:
    return 2.0 * p * r / (p + r) if p + r > 0 else 0.0


def rouge_tokenize(text: str) -> list[str]:
    return text.lower().translate(_PUNCT_TABLE).split()


def normalize_keyword_set(
    words, stopwords: frozenset[str] = STOPWORDS
) -> frozenset[str]:
    out = set()
    for word in words:
        cleaned = word.lower().translate(_PUNCT_TABLE)
        if cleaned and cleaned not in stopwords:
            out.add(cleaned)
    return frozenset(out)


def keyword_prf(
    extracted, summary: ReferenceSummary, stopwords: frozenset[str] = STOPWORDS
) -> PRF:
    """Score extracted keyword surfaces against the summary's word set."""
    e = normalize_keyword_set(extracted, stopwords)
    g = normalize_keyword_set(summary.text.split(), stopwords)
    hit = len(e & g)
    p = hit / len(e) if e else 0.0
    r = hit / len(g) if g else 0.0
    return PRF(p, r, _f1(p, r))


def rouge_n(candidate: str, reference: str, n: int) -> RougeScore:
    """N-gram multiset overlap (n in {1, 2})."""
    if n not in (1, 2):
        raise ValueError(f"n must be 1 or 2, got {n}")
    cand = rouge_tokenize(candidate)
    ref = rouge_tokenize(reference)
    cand_grams = Counter(tuple(cand[i : i + n]) for i in range(len(cand) - n + 1))
    ref_grams = Counter(tuple(ref[i : i + n]) for i in range(len(ref) - n + 1))
    overlap = sum(min(c, ref_grams[g]) for g, c in cand_grams.items())
    p = overlap / sum(cand_grams.values()) if cand_grams else 0.0
    r = overlap / sum(ref_grams.values()) if ref_grams else 0.0
    return RougeScore(f"R{n}", p, r, _f1(p, r))


def rouge_l(candidate: str, reference: str) -> RougeScore:
    """Longest-common-subsequence overlap over tokens."""
    cand = rouge_tokenize(candidate)
    ref = rouge_tokenize(reference)
    if not cand or not ref:
        return RougeScore("RL", 0.0, 0.0, 0.0)
    vocab: dict[str, int] = {}
    for tok in cand:
        vocab.setdefault(tok, len(vocab))
    for tok in ref:
        vocab.setdefault(tok, len(vocab))
    a = np.array([vocab[t] for t in cand], dtype=np.int64)
    b = np.array([vocab[t] for t in ref], dtype=np.int64)
    lcs = _kernels.lcs_length(a, b)
    p = lcs / len(cand)
    r = lcs / len(ref)
    return RougeScore("RL", p, r, _f1(p, r))
