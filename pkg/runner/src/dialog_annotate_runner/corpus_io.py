"""Minimal corpus jsonl reader for the runner.

The runner talks to the annotation toolkit only through files, so it reads
the corpus format (``{"id", "dialogue", "summary"?}`` with newline-separated
``Speaker: text`` lines) with its own small parser rather than importing the
toolkit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class DialogueRecord:
    id: str
    utterances: tuple[tuple[str, ...], ...]  # words per utterance, no speakers
    speakers: tuple[str, ...]  # one speaker per utterance


def parse_dialogue_block(text: str, rec_id: str) -> DialogueRecord:
    utterances = []
    speakers = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        speaker, sep, rest = line.partition(": ")
        if not sep or not speaker.strip() or not rest.strip():
            raise ValueError(f"{rec_id}: line {lineno} is not 'Speaker: text'")
        utterances.append(tuple(rest.split()))
        speakers.append(speaker.strip())
    if not utterances:
        raise ValueError(f"{rec_id}: empty dialogue")
    return DialogueRecord(rec_id, tuple(utterances), tuple(speakers))


def load_corpus(path) -> list[DialogueRecord]:
    path = Path(path)
    records = []
    seen = set()
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            rec = json.loads(line)
            rec_id = rec["id"]
            if rec_id in seen:
                raise ValueError(f"{path}:{lineno}: duplicate id {rec_id!r}")
            seen.add(rec_id)
            records.append(parse_dialogue_block(rec["dialogue"], rec_id))
    return records
