"""Causal-LM scoring: per-subword response losses and per-EOS hidden states.

For every adjacent utterance pair the response is teacher-forced against the
model given the previous utterance as context (speakers never enter the
model), yielding one negative log-likelihood per response subword plus the
end-of-utterance token. A second pass over the whole dialogue, utterances
joined by the model's end-of-text token, yields the final-layer hidden state
at each separator; that state summarizes the dialogue prefix and is written
as the utterance's context embedding.

Words are encoded one at a time (with the byte-level leading-space
convention for non-initial words), which both preserves the exact
whole-text tokenization and gives the word/subword spans for free.

Outputs follow the score jsonl schema of the annotation toolkit:
``{"schema": 1, "id", "dim", "eos_embeddings", "pairs": [...]}`` with
embeddings printed at float32 precision.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch

from .corpus_io import DialogueRecord, load_corpus

log = logging.getLogger("dialog_annotate_runner")

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class RunnerConfig:
    model: str = "microsoft/DialoGPT-large"
    device: str = "cpu"
    max_context: int = 1024
    batch_size: int = 8


class AlignmentError(RuntimeError):
    """A word produced no tokens; spans cannot cover the response."""


def load_model(config: RunnerConfig):
    from transformers import AutoModelForCausalLM, AutoTokenizer

    tokenizer = AutoTokenizer.from_pretrained(config.model)
    model = AutoModelForCausalLM.from_pretrained(config.model)
    model.to(config.device)
    model.eval()
    if tokenizer.eos_token_id is None:
        raise ValueError(f"model {config.model!r} has no end-of-text token")
    if config.max_context > model.config.max_position_embeddings:
        raise ValueError(
            f"max_context {config.max_context} exceeds model limit "
            f"{model.config.max_position_embeddings}"
        )
    return tokenizer, model


def encode_words(tokenizer, words, continue_text: bool):
    """Per-word token ids plus half-open subword spans.

    ``continue_text`` prepends a space to the first word too (used when the
    words continue already-encoded text rather than starting it).
    """
    ids: list[int] = []
    spans: list[tuple[int, int]] = []
    for j, word in enumerate(words):
        text = f" {word}" if (j > 0 or continue_text) else word
        piece = tokenizer.encode(text, add_special_tokens=False)
        if not piece:
            raise AlignmentError(f"word {word!r} encodes to no tokens")
        spans.append((len(ids), len(ids) + len(piece)))
        ids.extend(piece)
    return ids, spans


def _pair_inputs(tokenizer, record: DialogueRecord, max_context: int):
    """Token ids and response layout for every context-response pair."""
    eos = tokenizer.eos_token_id
    out = []
    for i in range(2, len(record.utterances) + 1):
        ctx_ids, _ = encode_words(tokenizer, record.utterances[i - 2], False)
        resp_ids, spans = encode_words(tokenizer, record.utterances[i - 1], False)
        full = ctx_ids + [eos] + resp_ids + [eos]
        scored = len(resp_ids) + 1  # response subwords plus final EOS
        if scored + 1 > max_context:
            raise AlignmentError(
                f"{record.id}: response {i} needs {scored + 1} positions, "
                f"max_context is {max_context}"
            )
        if len(full) > max_context:
            log.info(
                "%s: pair %d context truncated from the left (%d > %d tokens)",
                record.id,
                i,
                len(full),
                max_context,
            )
            full = full[-max_context:]
        out.append(
            {
                "response_index": i,
                "ids": full,
                "resp_start": len(full) - scored,
                "scored": scored,
                "spans": spans,
            }
        )
    return out


def _batched_losses(model, device, pairs, batch_size, pad_id):
    """Fill each pair dict with its per-position NLL list."""
    for lo in range(0, len(pairs), batch_size):
        chunk = pairs[lo : lo + batch_size]
        width = max(len(p["ids"]) for p in chunk)
        ids = torch.full((len(chunk), width), pad_id, dtype=torch.long)
        mask = torch.zeros((len(chunk), width), dtype=torch.long)
        for row, p in enumerate(chunk):
            ids[row, : len(p["ids"])] = torch.tensor(p["ids"], dtype=torch.long)
            mask[row, : len(p["ids"])] = 1
        with torch.no_grad():
            logits = model(
                input_ids=ids.to(device), attention_mask=mask.to(device)
            ).logits
        logprobs = torch.log_softmax(logits.float(), dim=-1).cpu()
        for row, p in enumerate(chunk):
            losses = []
            for pos in range(p["resp_start"], p["resp_start"] + p["scored"]):
                token = p["ids"][pos]
                losses.append(max(0.0, float(-logprobs[row, pos - 1, token])))
            p["losses"] = losses


def _eos_hidden_states(model, tokenizer, device, record, max_context, batch_size):
    """Final-layer hidden state at each utterance separator of the dialogue
    sequence. Over-long sequences fall back to one left-clipped window per
    separator."""
    eos = tokenizer.eos_token_id
    ids: list[int] = []
    eos_positions: list[int] = []
    for words in record.utterances:
        # every utterance directly follows a separator (or starts the text),
        # so its first word carries no leading space, as in the pair inputs
        word_ids, _ = encode_words(tokenizer, words, continue_text=False)
        ids.extend(word_ids)
        ids.append(eos)
        eos_positions.append(len(ids) - 1)

    def last_hidden(batch_ids):
        width = max(len(b) for b in batch_ids)
        padded = torch.full((len(batch_ids), width), eos, dtype=torch.long)
        mask = torch.zeros((len(batch_ids), width), dtype=torch.long)
        for row, b in enumerate(batch_ids):
            padded[row, : len(b)] = torch.tensor(b, dtype=torch.long)
            mask[row, : len(b)] = 1
        with torch.no_grad():
            hidden = model(
                input_ids=padded.to(device),
                attention_mask=mask.to(device),
                output_hidden_states=True,
            ).hidden_states[-1]
        return [
            hidden[row, len(b) - 1].cpu().numpy() for row, b in enumerate(batch_ids)
        ]

    if len(ids) <= max_context:
        with torch.no_grad():
            hidden = model(
                input_ids=torch.tensor([ids], dtype=torch.long).to(device),
                output_hidden_states=True,
            ).hidden_states[-1]
        return [hidden[0, pos].cpu().numpy() for pos in eos_positions]

    log.info(
        "%s: dialogue sequence of %d tokens exceeds %d; "
        "using left-clipped windows per separator",
        record.id,
        len(ids),
        max_context,
    )
    rows = []
    windows = [ids[max(0, pos + 1 - max_context) : pos + 1] for pos in eos_positions]
    for lo in range(0, len(windows), batch_size):
        rows.extend(last_hidden(windows[lo : lo + batch_size]))
    return rows


def score_dialogue(record: DialogueRecord, tokenizer, model, config: RunnerConfig):
    """Score record dict in the interchange schema."""
    pairs = _pair_inputs(tokenizer, record, config.max_context)
    _batched_losses(
        model, config.device, pairs, config.batch_size, tokenizer.eos_token_id
    )
    hidden = _eos_hidden_states(
        model, tokenizer, config.device, record, config.max_context, config.batch_size
    )
    embeddings = [[float(np.float32(x)) for x in row] for row in hidden]
    return {
        "schema": SCHEMA_VERSION,
        "id": record.id,
        "dim": len(embeddings[0]),
        "eos_embeddings": embeddings,
        "pairs": [
            {
                "response_index": p["response_index"],
                "subword_losses": p["losses"],
                "word_spans": [list(span) for span in p["spans"]],
            }
            for p in pairs
        ],
    }


def score_corpus(corpus_path, output_path, config: RunnerConfig) -> int:
    """Score every dialogue; returns the number of failed records."""
    tokenizer, model = load_model(config)
    records = load_corpus(corpus_path)
    failures = 0
    with Path(output_path).open("w", encoding="utf-8") as fh:
        for record in records:
            try:
                scored = score_dialogue(record, tokenizer, model, config)
            except AlignmentError as exc:
                failures += 1
                log.error("%s: %s", record.id, exc)
                continue
            fh.write(json.dumps(scored, allow_nan=False))
            fh.write("\n")
    return failures
