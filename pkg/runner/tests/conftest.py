"""Builds a tiny byte-level BPE tokenizer and randomly initialized GPT-2
style model on disk, so the full load/score/write path runs offline."""

import json

import pytest
import torch
from tokenizers import Tokenizer
from tokenizers.decoders import ByteLevel as ByteLevelDecoder
from tokenizers.models import BPE
from tokenizers.pre_tokenizers import ByteLevel
from tokenizers.trainers import BpeTrainer
from transformers import GPT2Config, GPT2LMHeadModel, PreTrainedTokenizerFast

EOT = "<|endoftext|>"

TRAIN_TEXT = [
    "hello there friend how are you",
    "the party is on friday evening",
    "we should meet at the cafe tomorrow",
    "did you finish the report yesterday",
    "sounds great see you then",
    "what an unpredictable conversation this is",
]


@pytest.fixture(scope="session")
def tiny_model_dir(tmp_path_factory):
    path = tmp_path_factory.mktemp("tiny-model")

    tokenizer = Tokenizer(BPE(unk_token=None))
    tokenizer.pre_tokenizer = ByteLevel(add_prefix_space=False)
    tokenizer.decoder = ByteLevelDecoder()
    trainer = BpeTrainer(
        vocab_size=320,
        special_tokens=[EOT],
        initial_alphabet=ByteLevel.alphabet(),
        show_progress=False,
    )
    tokenizer.train_from_iterator(TRAIN_TEXT, trainer)
    fast = PreTrainedTokenizerFast(
        tokenizer_object=tokenizer,
        eos_token=EOT,
        bos_token=EOT,
        unk_token=EOT,
    )
    fast.save_pretrained(path)

    torch.manual_seed(1234)
    config = GPT2Config(
        vocab_size=len(fast),
        n_positions=64,
        n_embd=32,
        n_layer=2,
        n_head=2,
        bos_token_id=fast.eos_token_id,
        eos_token_id=fast.eos_token_id,
    )
    model = GPT2LMHeadModel(config)
    model.save_pretrained(path)
    return str(path)


@pytest.fixture
def corpus_file(tmp_path):
    records = [
        {
            "id": "d1",
            "dialogue": "Amanda: hello there friend\n"
            "Jerry: the party is on friday\n"
            "Amanda: sounds great see you then",
            "summary": "Amanda and Jerry talk about the party.",
        },
        {
            "id": "d2",
            "dialogue": "Ann: did you finish the report\nBob: yes i did finish it",
            "summary": "Bob finished the report.",
        },
        # duplicate content under a different id, for determinism checks
        {
            "id": "d2-copy",
            "dialogue": "Ann: did you finish the report\nBob: yes i did finish it",
            "summary": "Bob finished the report.",
        },
    ]
    path = tmp_path / "corpus.jsonl"
    path.write_text(
        "\n".join(json.dumps(r) for r in records) + "\n", encoding="utf-8"
    )
    return path
