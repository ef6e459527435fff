"""Corpus statistics, ratio heuristics for r_ke / r_ts, and grid sweeps.

The two heuristics predetermine sensible annotation ratios from the train
split alone: summaries compress dialogues, so the share of dialogue words
worth keeping (r_ke) is about the stopword-free summary length over the
dialogue length, and the share of utterances starting a topic (r_ts) is
about the summary sentence count over the turn count, one summary sentence
tending to cover one topic.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from .annotate import HParams, Task, annotate
from .corpus import Dialogue, ReferenceSummary, annotated_to_record
from .errors import MissingBundle, MissingSummary
from .evaluate import keyword_prf
from .scoring import ScoreBundle
from .stopwords import STOPWORDS

_PUNCT_TABLE = str.maketrans("", "", string.punctuation)

CorpusRecord = tuple[Dialogue, Optional[ReferenceSummary]]


@dataclass(frozen=True)
class CorpusStats:
    n: int
    avg_turns: float
    avg_dialogue_tokens: float
    avg_summary_tokens: float
    avg_summary_tokens_no_stopwords: float
    avg_summary_sentences: float


@dataclass(frozen=True)
class Grid:
    """Candidate values for one-axis-at-a-time hyper-parameter sweeps."""

    r_ke_values: tuple[float, ...] = ()
    t_rd_values: tuple[float, ...] = ()
    r_ts_values: tuple[float, ...] = ()

    def __post_init__(self):
        for value in self.r_ke_values + self.r_ts_values:
            if not 0.0 <= value <= 100.0:
                raise ValueError(f"ratio {value} outside [0, 100]")
        for value in self.t_rd_values:
            if not 0.0 < value <= 1.0:
                raise ValueError(f"threshold {value} outside (0, 1]")

    def __len__(self) -> int:
        return len(self.r_ke_values) + len(self.t_rd_values) + len(self.r_ts_values)

    @classmethod
    def samsum(cls) -> "Grid":
        return cls(
            r_ke_values=(10.0, 15.0, 20.0, 25.0),
            t_rd_values=(0.95, 0.96, 0.97, 0.98, 0.99),
            r_ts_values=(10.0, 15.0, 20.0, 25.0),
        )

    @classmethod
    def ami(cls) -> "Grid":
        return cls(
            r_ke_values=(3.0, 4.0, 5.0, 6.0),
            t_rd_values=(0.95, 0.96, 0.97, 0.98, 0.99),
            r_ts_values=(4.0, 5.0, 6.0, 7.0),
        )


def tokenize(text: str) -> list[str]:
    """Whitespace split after stripping punctuation characters."""
    cleaned = text.translate(_PUNCT_TABLE)
    return cleaned.split()


def compute_stats(
    corpus: Iterable[CorpusRecord], stopwords: frozenset[str] = STOPWORDS
) -> CorpusStats:
    """Averages over a corpus whose every record carries a summary."""
    n = 0
    turns = dialogue_tokens = summary_tokens = 0
    summary_tokens_ns = summary_sentences = 0
    for dialogue, summary in corpus:
        if summary is None:
            raise MissingSummary(f"{dialogue.id}: record has no reference summary")
        n += 1
        turns += len(dialogue)
        for utt in dialogue.utterances:
            dialogue_tokens += len(tokenize(" ".join(utt.words)))
        stoks = tokenize(summary.text)
        summary_tokens += len(stoks)
        summary_tokens_ns += sum(1 for t in stoks if t.lower() not in stopwords)
        summary_sentences += len(summary.sentences)
    if n == 0:
        raise MissingSummary("corpus is empty")
    return CorpusStats(
        n=n,
        avg_turns=turns / n,
        avg_dialogue_tokens=dialogue_tokens / n,
        avg_summary_tokens=summary_tokens / n,
        avg_summary_tokens_no_stopwords=summary_tokens_ns / n,
        avg_summary_sentences=summary_sentences / n,
    )


def estimate_r_ke(stats: CorpusStats) -> float:
    """Stopword-free summary length over dialogue length, as a percent."""
    if stats.avg_dialogue_tokens == 0:
        raise ZeroDivisionError("avg_dialogue_tokens is zero")
    return 100.0 * stats.avg_summary_tokens_no_stopwords / stats.avg_dialogue_tokens


def estimate_r_ts(stats: CorpusStats) -> float:
    """Summary sentences over dialogue turns, as a percent."""
    if stats.avg_turns == 0:
        raise ZeroDivisionError("avg_turns is zero")
    return 100.0 * stats.avg_summary_sentences / stats.avg_turns


@dataclass(frozen=True)
class GridRow:
    param: str
    value: float
    metric: Optional[float]
    output_path: str


def _annotate_corpus(
    corpus: list[CorpusRecord],
    bundles: dict[str, ScoreBundle],
    hp: HParams,
    tasks: frozenset[Task],
) -> list:
    out = []
    for dialogue, _ in corpus:
        out.append(annotate(dialogue, bundles[dialogue.id], hp, tasks))
    return out


def _write_variant(annotated, path: Path) -> None:
    import json

    with path.open("w", encoding="utf-8") as fh:
        for a in annotated:
            fh.write(json.dumps(annotated_to_record(a), ensure_ascii=False))
            fh.write("\n")


def grid_search(
    corpus: list[CorpusRecord],
    bundles: dict[str, ScoreBundle],
    grid: Grid,
    objective: str = "none",
    out_dir=".",
    base: HParams | None = None,
    stopwords: frozenset[str] = STOPWORDS,
    boundary_target: Optional[float] = None,
) -> list[GridRow]:
    """Emit one single-task annotated corpus variant per grid value.

    Each axis is swept independently, the other parameters pinned at
    ``base``. ``objective="keyword_f1"`` scores r_ke variants by macro
    keyword F1 against reference summaries (rows ranked best first);
    ``objective="boundary_count_target"`` scores r_ts variants by mean
    boundaries per dialogue, ranked by closeness to ``boundary_target``.
    Other rows carry no metric and keep grid order. Ranking by downstream
    summarizer quality is deliberately not offered; these are proxies.
    """
    if len(grid) == 0:
        raise ValueError("grid is empty")
    if objective not in {"none", "keyword_f1", "boundary_count_target"}:
        raise ValueError(f"unknown objective {objective!r}")
    if objective == "boundary_count_target" and boundary_target is None:
        raise ValueError("boundary_count_target objective needs boundary_target")
    base = base or HParams()
    missing = [d.id for d, _ in corpus if d.id not in bundles]
    if missing:
        raise MissingBundle(f"no score bundles for ids: {missing}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    rows: list[GridRow] = []

    def emit(param: str, value: float, hp: HParams, tasks: frozenset[Task]):
        annotated = _annotate_corpus(corpus, bundles, hp, tasks)
        path = out_dir / f"{param}_{value:g}.jsonl"
        _write_variant(annotated, path)
        metric = None
        if param == "r_ke" and objective == "keyword_f1":
            scores = []
            for a, (_, summary) in zip(annotated, corpus):
                if summary is None:
                    raise MissingSummary(
                        f"{a.dialogue.id}: keyword_f1 needs reference summaries"
                    )
                scores.append(
                    keyword_prf(a.keywords.keywords, summary, stopwords).f1
                )
            metric = sum(scores) / len(scores)
        elif param == "r_ts" and objective == "boundary_count_target":
            counts = [
                len(a.topics.boundaries) if a.topics is not None else 0
                for a in annotated
            ]
            metric = sum(counts) / len(counts)
        rows.append(GridRow(param, value, metric, str(path)))

    for value in grid.r_ke_values:
        emit("r_ke", value, HParams(value, base.t_rd, base.r_ts), frozenset({Task.KE}))
    for value in grid.t_rd_values:
        emit("t_rd", value, HParams(base.r_ke, value, base.r_ts), frozenset({Task.RD}))
    for value in grid.r_ts_values:
        emit("r_ts", value, HParams(base.r_ke, base.t_rd, value), frozenset({Task.TS}))

    # Ranked axes reorder within their group; everything else keeps grid order.
    axis_order = {"r_ke": 0, "t_rd": 1, "r_ts": 2}

    def rank_key(row: GridRow) -> tuple:
        if row.param == "r_ke" and objective == "keyword_f1":
            return (-row.metric, row.value)
        if row.param == "r_ts" and objective == "boundary_count_target":
            return (abs(row.metric - boundary_target), row.value)
        return ()

    rows.sort(key=lambda r: (axis_order[r.param], rank_key(r)))
    return rows


def write_grid_tsv(rows: list[GridRow], path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write("param\tvalue\tmetric\toutput_path\n")
        for row in rows:
            metric = "" if row.metric is None else f"{row.metric:.6f}"
            fh.write(f"{row.param}\t{row.value:g}\t{metric}\t{row.output_path}\n")
