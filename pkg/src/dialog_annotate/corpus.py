"""Dialogue corpus types, the ``Speaker: text`` line grammar, and the
``[TS]`` / ``[RD]`` / ``#KEY#`` tag grammar for annotated dialogues.

All types are immutable after construction, so dialogues can be processed in
parallel with no shared mutable state.

Tag grammar, per annotated utterance line::

    [TS] Speaker: [RD] word word ...

``[TS]`` (topic start) precedes the speaker, ``[RD]`` (redundant) follows it.
If keyword annotation is present, the dialogue ends with one extra line::

    #KEY# <speakers in first-appearance order> <keywords in rank order>

A redundant tag on the first utterance is legal (the rule-based baseline can
produce it); a topic tag on the first utterance is not, since a topic can
only start relative to a preceding utterance.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .errors import (
    DuplicateId,
    EmptyDialogue,
    IoError,
    MalformedLine,
    MalformedRecord,
    TagGrammarError,
)

TS_TAG = "[TS]"
RD_TAG = "[RD]"
KEY_TAG = "#KEY#"
ID_TAG = "#ID#"

_TAGS = (TS_TAG, RD_TAG, KEY_TAG, ID_TAG)

_WS_RUN = re.compile(r"[ \t]+")
_SENTENCE_END = re.compile(r"(?<=[.!?])\s+")


def normalize_ws(text: str) -> str:
    """Collapse runs of spaces/tabs to one space and strip the ends."""
    return _WS_RUN.sub(" ", text).strip()


@dataclass(frozen=True)
class Utterance:
    """One dialogue turn: a speaker plus whitespace-tokenized words."""

    index: int
    speaker: str
    words: tuple[str, ...]
    raw_text: str

    def __post_init__(self):
        if self.index < 1:
            raise ValueError(f"utterance index must be >= 1, got {self.index}")
        if not self.speaker:
            raise ValueError("utterance speaker must be non-empty")
        if not self.words:
            raise ValueError("utterance must contain at least one word")
        if " ".join(self.words) != normalize_ws(self.raw_text):
            raise ValueError("words do not retokenize raw_text")

    @classmethod
    def from_text(cls, index: int, speaker: str, text: str) -> "Utterance":
        return cls(index, speaker, tuple(text.split()), text)


@dataclass(frozen=True)
class Dialogue:
    """A parsed multi-speaker conversation with 1-based utterance indices."""

    id: str
    utterances: tuple[Utterance, ...]

    def __post_init__(self):
        if not self.utterances:
            raise ValueError("dialogue must contain at least one utterance")
        for pos, utt in enumerate(self.utterances, start=1):
            if utt.index != pos:
                raise ValueError(
                    f"utterance indices must be 1..{len(self.utterances)} in order"
                )

    def __len__(self) -> int:
        return len(self.utterances)

    def speakers_in_order(self) -> tuple[str, ...]:
        """Distinct speaker names, in order of first appearance."""
        seen: list[str] = []
        for utt in self.utterances:
            if utt.speaker not in seen:
                seen.append(utt.speaker)
        return tuple(seen)


@dataclass(frozen=True)
class ReferenceSummary:
    dialogue_id: str
    text: str
    sentences: tuple[str, ...]

    @classmethod
    def from_text(cls, dialogue_id: str, text: str) -> "ReferenceSummary":
        return cls(dialogue_id, text, split_sentences(text))


def split_sentences(text: str) -> tuple[str, ...]:
    """Split on terminal punctuation followed by whitespace. Keeps all text."""
    parts = [normalize_ws(p) for p in _SENTENCE_END.split(text)]
    return tuple(p for p in parts if p)


@dataclass(frozen=True)
class KeywordHit:
    """One selected keyword occurrence with its loss and position."""

    surface: str
    loss: float
    utterance_index: int
    word_index: int


@dataclass(frozen=True)
class KeywordAnnotation:
    """Keyword annotation: speakers plus ranked keyword surfaces.

    ``details`` carries per-keyword loss and provenance when the annotation
    came from the extractor. It is excluded from equality because the tag
    grammar (and the jsonl annotation fields) only represent speakers and
    surfaces; round-tripping through either preserves exactly those.
    """

    speakers: tuple[str, ...]
    keywords: tuple[str, ...]
    details: Optional[tuple[KeywordHit, ...]] = field(default=None, compare=False)


@dataclass(frozen=True)
class RedundancyAnnotation:
    """Utterance indices marked redundant.

    The loss-based detector only ever yields indices >= 2; index 1 is legal
    here because the rule-based baseline has no such restriction.
    """

    indices: frozenset[int]


@dataclass(frozen=True)
class TopicAnnotation:
    """Utterance indices that begin a new topic (always >= 2)."""

    boundaries: frozenset[int]


@dataclass(frozen=True)
class AnnotatedDialogue:
    """A dialogue plus any subset of the three annotations.

    Empty redundancy/topic annotations are canonicalized to ``None`` at
    construction: the rendered text for "annotation ran, found nothing" and
    "annotation absent" is identical, so keeping both forms would break the
    render/parse round trip. An empty keyword annotation stays, because the
    ``#KEY#`` line (with just the speakers) is observable.
    """

    dialogue: Dialogue
    keywords: Optional[KeywordAnnotation] = None
    redundant: Optional[RedundancyAnnotation] = None
    topics: Optional[TopicAnnotation] = None

    def __post_init__(self):
        if self.redundant is not None and not self.redundant.indices:
            object.__setattr__(self, "redundant", None)
        if self.topics is not None and not self.topics.boundaries:
            object.__setattr__(self, "topics", None)
        n = len(self.dialogue)
        if self.redundant is not None:
            bad = [i for i in self.redundant.indices if not 1 <= i <= n]
            if bad:
                raise ValueError(f"redundant indices out of range: {sorted(bad)}")
        if self.topics is not None:
            bad = [i for i in self.topics.boundaries if not 2 <= i <= n]
            if bad:
                raise ValueError(f"topic boundaries out of range: {sorted(bad)}")
        if self.keywords is not None:
            expected = self.dialogue.speakers_in_order()
            if self.keywords.speakers != expected:
                raise ValueError(
                    "keyword annotation speakers must be the dialogue speakers "
                    f"in first-appearance order {expected}, "
                    f"got {self.keywords.speakers}"
                )


# -- line grammar --


def parse_dialogue(text: str, id: str) -> Dialogue:
    """Parse ``Speaker: text`` lines into a Dialogue.

    Blank lines are skipped. Raises MalformedLine when a line lacks the
    ``: `` separator, a speaker, or any utterance text; EmptyDialogue when
    nothing remains.
    """
    utterances: list[Utterance] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        speaker, sep, rest = stripped.partition(": ")
        speaker = speaker.strip()
        rest = rest.strip()
        if not sep or not speaker or not rest:
            raise MalformedLine(f"{id}: line {lineno} is not 'Speaker: text': {line!r}")
        utterances.append(Utterance.from_text(len(utterances) + 1, speaker, rest))
    if not utterances:
        raise EmptyDialogue(f"{id}: no utterance lines")
    return Dialogue(id, tuple(utterances))


def render_dialogue(d: Dialogue) -> str:
    """Plain ``Speaker: text`` rendering, whitespace-normalized."""
    return "\n".join(f"{u.speaker}: {' '.join(u.words)}" for u in d.utterances)


def render_annotated(a: AnnotatedDialogue) -> str:
    """Render an annotated dialogue in the tag grammar."""
    redundant = a.redundant.indices if a.redundant is not None else frozenset()
    topics = a.topics.boundaries if a.topics is not None else frozenset()
    lines = []
    for utt in a.dialogue.utterances:
        parts = []
        if utt.index in topics:
            parts.append(TS_TAG)
        head = f"{utt.speaker}:"
        if utt.index in redundant:
            head = f"{head} {RD_TAG}"
        parts.append(head)
        parts.extend(utt.words)
        lines.append(" ".join(parts))
    if a.keywords is not None:
        tokens = [KEY_TAG, *a.keywords.speakers, *a.keywords.keywords]
        lines.append(" ".join(tokens))
    return "\n".join(lines)


def _check_no_stray_tags(tokens: Iterable[str], where: str) -> None:
    for tok in tokens:
        if tok in _TAGS:
            raise TagGrammarError(f"stray {tok} tag in {where}")


def parse_annotated(text: str, id: str = "") -> AnnotatedDialogue:
    """Inverse of render_annotated.

    Raises TagGrammarError for any stray or misplaced tag, including a
    ``#KEY#`` line before the end, ``[RD]`` preceding the speaker, or
    ``[TS]`` on the first utterance.
    """
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines:
        raise EmptyDialogue(f"{id}: no lines to parse")

    keyword_line: Optional[str] = None
    if lines and lines[-1].split(maxsplit=1)[0] == KEY_TAG:
        keyword_line = lines.pop()
    for line in lines:
        if line.split(maxsplit=1)[0] == KEY_TAG:
            raise TagGrammarError(f"{id}: {KEY_TAG} line before end of dialogue")

    utterances: list[Utterance] = []
    redundant: set[int] = set()
    topics: set[int] = set()
    for line in lines:
        index = len(utterances) + 1
        if line.startswith(TS_TAG + " "):
            if index == 1:
                raise TagGrammarError(f"{id}: {TS_TAG} before the first utterance")
            topics.add(index)
            line = line[len(TS_TAG) + 1 :]
        if line.startswith(RD_TAG):
            raise TagGrammarError(f"{id}: {RD_TAG} must follow the speaker")
        speaker, sep, rest = line.partition(": ")
        speaker = speaker.strip()
        rest = rest.strip()
        if not sep or not speaker or not rest:
            raise TagGrammarError(f"{id}: not an utterance line: {line!r}")
        _check_no_stray_tags(speaker.split(), f"{id} speaker")
        if rest.startswith(RD_TAG + " "):
            redundant.add(index)
            rest = rest[len(RD_TAG) + 1 :]
        words = tuple(rest.split())
        if not words:
            raise TagGrammarError(f"{id}: empty utterance after tags: {line!r}")
        _check_no_stray_tags(words, f"{id} utterance {index}")
        utterances.append(Utterance(index, speaker, words, " ".join(words)))

    if not utterances:
        raise EmptyDialogue(f"{id}: no utterance lines")
    dialogue = Dialogue(id, tuple(utterances))

    keywords: Optional[KeywordAnnotation] = None
    if keyword_line is not None:
        tokens = keyword_line.split()[1:]
        speakers = dialogue.speakers_in_order()
        for speaker in speakers:
            expected = speaker.split()
            if tokens[: len(expected)] != expected:
                raise TagGrammarError(
                    f"{id}: {KEY_TAG} line must start with the dialogue speakers"
                )
            tokens = tokens[len(expected) :]
        _check_no_stray_tags(tokens, f"{id} keyword line")
        keywords = KeywordAnnotation(speakers, tuple(tokens))

    return AnnotatedDialogue(
        dialogue,
        keywords=keywords,
        redundant=RedundancyAnnotation(frozenset(redundant)),
        topics=TopicAnnotation(frozenset(topics)),
    )


# -- corpus files --


def load_corpus(
    path, fmt: str = "jsonl"
) -> list[tuple[Dialogue, Optional[ReferenceSummary]]]:
    """Load a corpus of dialogues with optional reference summaries.

    ``jsonl``: one object per line with fields ``id``, ``dialogue`` (a
    newline-separated block of ``Speaker: text`` lines) and optional
    ``summary``. ``text-dir``: a directory of ``<id>.txt`` dialogue files
    and optional ``<id>.summary.txt`` companions.
    """
    path = Path(path)
    if fmt == "jsonl":
        return _load_jsonl_corpus(path)
    if fmt == "text-dir":
        return _load_text_dir_corpus(path)
    raise ValueError(f"unknown corpus format: {fmt!r}")


def _load_jsonl_corpus(path: Path):
    if not path.is_file():
        raise IoError(f"corpus file not found: {path}")
    out = []
    seen: set[str] = set()
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(f"{path}:{lineno}: invalid JSON: {exc}") from exc
            if not isinstance(rec, dict):
                raise MalformedRecord(f"{path}:{lineno}: record is not an object")
            try:
                rec_id = rec["id"]
                dialogue_text = rec["dialogue"]
            except KeyError as exc:
                raise MalformedRecord(f"{path}:{lineno}: missing field {exc}") from exc
            if not isinstance(rec_id, str) or not isinstance(dialogue_text, str):
                raise MalformedRecord(f"{path}:{lineno}: id/dialogue must be strings")
            if rec_id in seen:
                raise DuplicateId(f"{path}: duplicate dialogue id {rec_id!r}")
            seen.add(rec_id)
            dialogue = parse_dialogue(dialogue_text, rec_id)
            summary = None
            if rec.get("summary") is not None:
                if not isinstance(rec["summary"], str):
                    raise MalformedRecord(f"{path}:{lineno}: summary must be a string")
                summary = ReferenceSummary.from_text(rec_id, rec["summary"])
            out.append((dialogue, summary))
    return out


def _load_text_dir_corpus(path: Path):
    if not path.is_dir():
        raise IoError(f"corpus directory not found: {path}")
    out = []
    for txt in sorted(path.glob("*.txt")):
        if txt.name.endswith(".summary.txt"):
            continue
        rec_id = txt.stem
        dialogue = parse_dialogue(txt.read_text(encoding="utf-8"), rec_id)
        summary_path = path / f"{rec_id}.summary.txt"
        summary = None
        if summary_path.is_file():
            summary = ReferenceSummary.from_text(
                rec_id, summary_path.read_text(encoding="utf-8").strip()
            )
        out.append((dialogue, summary))
    return out


# -- annotated corpus serialization --


def annotated_to_record(a: AnnotatedDialogue) -> dict:
    """Jsonl representation with explicit annotation fields."""
    rec = {"id": a.dialogue.id, "dialogue": render_dialogue(a.dialogue)}
    rec["keywords"] = list(a.keywords.keywords) if a.keywords is not None else None
    rec["redundant"] = (
        sorted(a.redundant.indices) if a.redundant is not None else None
    )
    rec["topics"] = sorted(a.topics.boundaries) if a.topics is not None else None
    return rec


def annotated_from_record(rec: dict) -> AnnotatedDialogue:
    try:
        dialogue = parse_dialogue(rec["dialogue"], rec["id"])
    except KeyError as exc:
        raise MalformedRecord(f"annotated record missing field {exc}") from exc
    keywords = None
    if rec.get("keywords") is not None:
        keywords = KeywordAnnotation(
            dialogue.speakers_in_order(), tuple(rec["keywords"])
        )
    redundant = RedundancyAnnotation(frozenset(rec.get("redundant") or ()))
    topics = TopicAnnotation(frozenset(rec.get("topics") or ()))
    return AnnotatedDialogue(dialogue, keywords, redundant, topics)


def render_corpus_text(annotated: Iterable[AnnotatedDialogue]) -> str:
    """Multi-dialogue text file: ``#ID# <id>`` header per block, blank-line
    separated."""
    blocks = [f"{ID_TAG} {a.dialogue.id}\n{render_annotated(a)}" for a in annotated]
    return "\n\n".join(blocks) + "\n"


def parse_corpus_text(text: str) -> list[AnnotatedDialogue]:
    blocks = [b for b in re.split(r"\n\s*\n", text) if b.strip()]
    out = []
    for block in blocks:
        header, _, body = block.partition("\n")
        header = header.strip()
        if not header.startswith(ID_TAG + " "):
            raise TagGrammarError(f"block does not start with '{ID_TAG} <id>' header")
        rec_id = header[len(ID_TAG) + 1 :].strip()
        out.append(parse_annotated(body, rec_id))
    return out
