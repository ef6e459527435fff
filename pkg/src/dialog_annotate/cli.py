"""Batch command-line front end.

Subcommands: ``annotate``, ``estimate``, ``eval keywords|rouge``,
``baseline rule-rd|c99|textrank``, ``grid``. Corpus and score files are
aligned by id, never by position. Identical inputs and flags produce
byte-identical outputs.

Exit codes: 2 for schema/format errors, 3 for id mismatches (a dialogue
without a score bundle, or a bundle that does not fit its dialogue), 4 for
invalid hyper-parameters, 1 for anything else.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import baselines, hparams as hparams_mod
from .annotate import HParams, Task, annotate, percent_share
from .corpus import (
    AnnotatedDialogue,
    KeywordAnnotation,
    annotated_from_record,
    annotated_to_record,
    load_corpus,
    render_corpus_text,
)
from .errors import (
    AnnotatorError,
    BundleMismatch,
    InvalidHParams,
    IoError,
    MalformedRecord,
    MissingBundle,
    SchemaError,
)
from .evaluate import keyword_prf, rouge_l, rouge_n
from .scoring import import_scores
from .stopwords import STOPWORDS

log = logging.getLogger("dialog_annotate")

EXIT_SCHEMA = 2
EXIT_ID_MISMATCH = 3
EXIT_HPARAMS = 4


def _exit_code(exc: AnnotatorError) -> int:
    if isinstance(exc, (MissingBundle, BundleMismatch)):
        return EXIT_ID_MISMATCH
    if isinstance(exc, InvalidHParams):
        return EXIT_HPARAMS
    return EXIT_SCHEMA


def _workers(args) -> int:
    if args.workers is not None:
        return max(1, args.workers)
    env = os.environ.get("DIALOG_ANNOTATE_WORKERS")
    return max(1, int(env)) if env else 1


def _write_output(annotated: list[AnnotatedDialogue], path: str, fmt: str) -> None:
    if fmt == "text":
        payload = render_corpus_text(annotated)
    else:
        lines = [
            json.dumps(annotated_to_record(a), ensure_ascii=False) for a in annotated
        ]
        payload = "\n".join(lines) + "\n"
    if path == "-":
        sys.stdout.write(payload)
    else:
        Path(path).write_text(payload, encoding="utf-8")


def _parse_tasks(spec: str) -> frozenset[Task]:
    names = [t.strip() for t in spec.split(",") if t.strip()]
    try:
        return frozenset(Task(name.lower()) for name in names)
    except ValueError:
        raise InvalidHParams(f"unknown task in {spec!r}; use ke,rd,ts")


def _hparams_from_args(args) -> HParams:
    base = HParams.ami() if args.preset == "ami" else HParams.samsum()
    return HParams(
        r_ke=base.r_ke if args.r_ke is None else args.r_ke,
        t_rd=base.t_rd if args.t_rd is None else args.t_rd,
        r_ts=base.r_ts if args.r_ts is None else args.r_ts,
    )


# -- annotate --


def cmd_annotate(args) -> int:
    hp = _hparams_from_args(args)
    tasks = _parse_tasks(args.tasks)
    corpus = load_corpus(args.input)
    bundles = import_scores(args.scores)

    failures: list[tuple[str, AnnotatorError]] = []

    def run(record):
        dialogue, _ = record
        if dialogue.id not in bundles:
            raise MissingBundle(f"no score bundle for dialogue {dialogue.id!r}")
        return annotate(dialogue, bundles[dialogue.id], hp, tasks)

    annotated: list[AnnotatedDialogue] = []
    with ThreadPoolExecutor(max_workers=_workers(args)) as pool:
        futures = [pool.submit(run, record) for record in corpus]
        for record, future in zip(corpus, futures):
            try:
                annotated.append(future.result())
            except AnnotatorError as exc:
                failures.append((record[0].id, exc))
                log.error("%s: %s", record[0].id, exc)

    _write_output(annotated, args.output, args.format)
    if failures:
        return _exit_code(failures[0][1])
    return 0


# -- estimate --


def cmd_estimate(args) -> int:
    corpus = load_corpus(args.input)
    stats = hparams_mod.compute_stats(corpus, STOPWORDS)
    print(f"records\t{stats.n}")
    print(f"avg_turns\t{stats.avg_turns:.2f}")
    print(f"avg_dialogue_tokens\t{stats.avg_dialogue_tokens:.2f}")
    print(f"avg_summary_tokens\t{stats.avg_summary_tokens:.2f}")
    print(
        f"avg_summary_tokens_no_stopwords\t"
        f"{stats.avg_summary_tokens_no_stopwords:.2f}"
    )
    print(f"avg_summary_sentences\t{stats.avg_summary_sentences:.2f}")
    print(f"estimated_r_ke\t{hparams_mod.estimate_r_ke(stats):.2f}")
    print(f"estimated_r_ts\t{hparams_mod.estimate_r_ts(stats):.2f}")
    return 0


# -- eval --


def _load_annotated(path) -> list[AnnotatedDialogue]:
    path = Path(path)
    if not path.is_file():
        raise IoError(f"annotated file not found: {path}")
    out = []
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                out.append(annotated_from_record(json.loads(line)))
            except json.JSONDecodeError as exc:
                raise MalformedRecord(f"{path}:{lineno}: {exc}") from exc
    return out


def _load_texts(path) -> dict[str, str]:
    """Read ``{"id", "text"}`` (or ``"summary"``) jsonl into a map."""
    path = Path(path)
    if not path.is_file():
        raise IoError(f"text file not found: {path}")
    out: dict[str, str] = {}
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                text = rec.get("text", rec.get("summary"))
                if text is None:
                    raise KeyError("text")
                out[rec["id"]] = text
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise MalformedRecord(f"{path}:{lineno}: {exc}") from exc
    return out


def _emit_tsv(rows: list[tuple[str, str, float, float, float]], path: str) -> None:
    lines = ["id\tmetric\tprecision\trecall\tf1"]
    for rec_id, metric, p, r, f1 in rows:
        lines.append(f"{rec_id}\t{metric}\t{p:.6f}\t{r:.6f}\t{f1:.6f}")
    payload = "\n".join(lines) + "\n"
    if path == "-":
        sys.stdout.write(payload)
    else:
        Path(path).write_text(payload, encoding="utf-8")


def _macro(rows, metric: str):
    triples = [(p, r, f1) for _, m, p, r, f1 in rows if m == metric]
    if not triples:
        return ("MACRO", metric, 0.0, 0.0, 0.0)
    n = len(triples)
    return (
        "MACRO",
        metric,
        sum(t[0] for t in triples) / n,
        sum(t[1] for t in triples) / n,
        sum(t[2] for t in triples) / n,
    )


def cmd_eval_keywords(args) -> int:
    annotated = _load_annotated(args.annotated)
    references = {d.id: s for d, s in load_corpus(args.references)}
    rows = []
    for a in annotated:
        rec_id = a.dialogue.id
        if rec_id not in references or references[rec_id] is None:
            raise SchemaError(f"no reference summary for dialogue {rec_id!r}")
        if a.keywords is None:
            raise SchemaError(f"record {rec_id!r} carries no keyword annotation")
        prf = keyword_prf(a.keywords.keywords, references[rec_id], STOPWORDS)
        rows.append((rec_id, "keywords", prf.precision, prf.recall, prf.f1))
    rows.append(_macro(rows, "keywords"))
    _emit_tsv(rows, args.output)
    return 0


def cmd_eval_rouge(args) -> int:
    candidates = _load_texts(args.candidates)
    references = _load_texts(args.references)
    missing = sorted(set(candidates) - set(references))
    if missing:
        raise SchemaError(f"no reference text for ids: {missing}")
    rows = []
    for rec_id in candidates:
        cand, ref = candidates[rec_id], references[rec_id]
        for score in (rouge_n(cand, ref, 1), rouge_n(cand, ref, 2), rouge_l(cand, ref)):
            rows.append((rec_id, score.variant, score.precision, score.recall, score.f1))
    for variant in ("R1", "R2", "RL"):
        rows.append(_macro(rows, variant))
    _emit_tsv(rows, args.output)
    return 0


# -- baselines --


def load_vectors(path) -> dict[str, np.ndarray]:
    """Read per-dialogue sentence vectors from the score jsonl schema.

    Only ``id``, ``dim`` and ``eos_embeddings`` are required, so both full
    score files and vectors-only files are accepted.
    """
    path = Path(path)
    if not path.is_file():
        raise IoError(f"vector file not found: {path}")
    out: dict[str, np.ndarray] = {}
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                rec_id = rec["id"]
                dim = rec["dim"]
                rows = rec["eos_embeddings"]
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise SchemaError(f"{path}:{lineno}: {exc}") from exc
            vectors = np.asarray(rows, dtype=np.float64)
            if vectors.ndim != 2 or vectors.shape[1] != dim:
                raise SchemaError(f"{path}:{lineno}: embeddings do not match dim")
            out[rec_id] = vectors
    return out


def cmd_baseline_rule_rd(args) -> int:
    corpus = load_corpus(args.input)
    tags = baselines.load_pos_tags(args.pos)
    annotated = []
    for dialogue, _ in corpus:
        if dialogue.id not in tags:
            raise MissingBundle(f"no POS tags for dialogue {dialogue.id!r}")
        tagged = baselines.PosTaggedDialogue(dialogue, tags[dialogue.id])
        annotated.append(
            AnnotatedDialogue(dialogue, redundant=baselines.rule_redundant(tagged))
        )
    _write_output(annotated, args.output, args.format)
    return 0


def cmd_baseline_c99(args) -> int:
    corpus = load_corpus(args.input)
    vectors = load_vectors(args.vectors)
    annotated = []
    for dialogue, _ in corpus:
        if dialogue.id not in vectors:
            raise MissingBundle(f"no vectors for dialogue {dialogue.id!r}")
        vecs = vectors[dialogue.id]
        if vecs.shape[0] != len(dialogue):
            raise BundleMismatch(
                f"{dialogue.id}: {vecs.shape[0]} vectors for "
                f"{len(dialogue)} utterances"
            )
        target = None
        if args.boundaries_from is not None:
            target = percent_share(args.boundaries_from, len(dialogue) - 1)
        topics = baselines.c99_segment(vecs, target_boundaries=target)
        annotated.append(AnnotatedDialogue(dialogue, topics=topics))
    _write_output(annotated, args.output, args.format)
    return 0


def cmd_baseline_textrank(args) -> int:
    corpus = load_corpus(args.input)
    annotated = []
    for dialogue, _ in corpus:
        keywords = baselines.textrank_keywords(dialogue, args.k, STOPWORDS)
        annotated.append(
            AnnotatedDialogue(
                dialogue,
                keywords=KeywordAnnotation(
                    dialogue.speakers_in_order(), tuple(keywords)
                ),
            )
        )
    _write_output(annotated, args.output, args.format)
    return 0


# -- grid --


def cmd_grid(args) -> int:
    corpus = load_corpus(args.input)
    bundles = import_scores(args.scores)
    grid = (
        hparams_mod.Grid.ami() if args.preset == "ami" else hparams_mod.Grid.samsum()
    )
    base = HParams.ami() if args.preset == "ami" else HParams.samsum()
    rows = hparams_mod.grid_search(
        corpus,
        bundles,
        grid,
        objective=args.objective,
        out_dir=args.out_dir,
        base=base,
        boundary_target=args.boundary_target,
    )
    hparams_mod.write_grid_tsv(rows, args.report)
    return 0


# -- argument wiring --


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dialog-annotate",
        description="Annotate dialogues with keywords, redundancy and topics "
        "from precomputed model scores.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("annotate", help="annotate a corpus from score bundles")
    p.add_argument("--input", required=True, help="corpus jsonl")
    p.add_argument("--scores", required=True, help="score jsonl")
    p.add_argument("--r-ke", type=float, default=None)
    p.add_argument("--t-rd", type=float, default=None)
    p.add_argument("--r-ts", type=float, default=None)
    p.add_argument("--preset", choices=["samsum", "ami"], default="samsum")
    p.add_argument("--tasks", default="ke,rd,ts")
    p.add_argument("--format", choices=["text", "jsonl"], default="jsonl")
    p.add_argument("--output", default="-")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_annotate)

    p = sub.add_parser("estimate", help="corpus statistics and ratio heuristics")
    p.add_argument("--input", required=True, help="corpus jsonl with summaries")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("eval", help="evaluation reports")
    eval_sub = p.add_subparsers(dest="eval_command", required=True)

    pe = eval_sub.add_parser("keywords", help="keyword P/R/F1 vs reference summaries")
    pe.add_argument("--annotated", required=True, help="annotated jsonl")
    pe.add_argument("--references", required=True, help="corpus jsonl with summaries")
    pe.add_argument("--output", default="-")
    pe.set_defaults(func=cmd_eval_keywords)

    pr = eval_sub.add_parser("rouge", help="ROUGE-1/2/L between text files")
    pr.add_argument("--candidates", required=True, help="jsonl with id+text")
    pr.add_argument("--references", required=True, help="jsonl with id+text/summary")
    pr.add_argument("--output", default="-")
    pr.set_defaults(func=cmd_eval_rouge)

    p = sub.add_parser("baseline", help="comparison annotators")
    base_sub = p.add_subparsers(dest="baseline_command", required=True)

    pb = base_sub.add_parser("rule-rd", help="POS-rule redundancy")
    pb.add_argument("--input", required=True)
    pb.add_argument("--pos", required=True, help="POS jsonl")
    pb.add_argument("--format", choices=["text", "jsonl"], default="jsonl")
    pb.add_argument("--output", default="-")
    pb.set_defaults(func=cmd_baseline_rule_rd)

    pc = base_sub.add_parser("c99", help="C99 topic segmentation")
    pc.add_argument("--input", required=True)
    pc.add_argument("--vectors", required=True, help="score-schema embedding jsonl")
    pc.add_argument(
        "--boundaries-from",
        type=float,
        default=None,
        metavar="R_TS",
        help="derive per-dialogue boundary counts from this ratio; "
        "omit for the automatic stop",
    )
    pc.add_argument("--format", choices=["text", "jsonl"], default="jsonl")
    pc.add_argument("--output", default="-")
    pc.set_defaults(func=cmd_baseline_c99)

    pt = base_sub.add_parser("textrank", help="TextRank keywords")
    pt.add_argument("--input", required=True)
    pt.add_argument("--k", type=int, required=True, help="keywords per dialogue")
    pt.add_argument("--format", choices=["text", "jsonl"], default="jsonl")
    pt.add_argument("--output", default="-")
    pt.set_defaults(func=cmd_baseline_textrank)

    p = sub.add_parser("grid", help="hyper-parameter sweeps")
    p.add_argument("--input", required=True)
    p.add_argument("--scores", required=True)
    p.add_argument("--preset", choices=["samsum", "ami"], default="samsum")
    p.add_argument(
        "--objective",
        choices=["none", "keyword_f1", "boundary_count_target"],
        default="none",
    )
    p.add_argument("--boundary-target", type=float, default=None)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--report", default="-")
    p.set_defaults(func=cmd_grid)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AnnotatorError as exc:
        log.error("%s", exc)
        return _exit_code(exc)
    except ValueError as exc:
        log.error("%s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
