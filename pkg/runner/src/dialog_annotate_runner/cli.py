"""Runner command line: ``score`` writes score bundles, ``pos`` writes
coarse POS tags. Both consume the corpus jsonl format and emit the file
formats that the annotation toolkit imports."""

from __future__ import annotations

import argparse
import logging
import sys

from .postag import pos_tag_corpus
from .scorer import RunnerConfig, score_corpus

log = logging.getLogger("dialog_annotate_runner")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dialog-annotate-runner",
        description="Produce score bundles and POS tags for dialogue corpora.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="run the conversational model over a corpus")
    p.add_argument("--input", required=True, help="corpus jsonl")
    p.add_argument("--output", required=True, help="score jsonl to write")
    p.add_argument("--model", default="microsoft/DialoGPT-large")
    p.add_argument("--device", default="cpu")
    p.add_argument("--max-context", type=int, default=1024)
    p.add_argument("--batch-size", type=int, default=8)

    p = sub.add_parser("pos", help="coarse POS tags for the rule baseline")
    p.add_argument("--input", required=True, help="corpus jsonl")
    p.add_argument("--output", required=True, help="POS jsonl to write")

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    if args.command == "score":
        config = RunnerConfig(
            model=args.model,
            device=args.device,
            max_context=args.max_context,
            batch_size=args.batch_size,
        )
        failures = score_corpus(args.input, args.output, config)
        if failures:
            log.error("%d record(s) failed", failures)
            return 1
        return 0
    return pos_tag_corpus(args.input, args.output)


if __name__ == "__main__":
    sys.exit(main())
