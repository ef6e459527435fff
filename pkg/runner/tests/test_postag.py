import json

from dialog_annotate_runner.corpus_io import parse_dialogue_block
from dialog_annotate_runner.postag import pos_tag_corpus, tag_dialogue, tag_word


class TestTagWord:
    def test_sentence_example(self):
        assert [tag_word(w) for w in ["I", "went", "home"]] == [
            "OTHER",
            "VERB",
            "NOUN",
        ]

    def test_closed_class(self):
        for word in ["the", "you", "and", "of", "ok", "very"]:
            assert tag_word(word) == "OTHER"

    def test_suffixes(self):
        assert tag_word("organize") == "VERB"
        assert tag_word("walking") == "VERB"
        assert tag_word("wonderful") == "ADJ"
        assert tag_word("readable") == "ADJ"
        assert tag_word("quickly") == "OTHER"

    def test_noun_default(self):
        assert tag_word("cake") == "NOUN"
        assert tag_word("Jupiter") == "NOUN"

    def test_punctuation_and_digits(self):
        assert tag_word("!!!") == "OTHER"
        assert tag_word("42") == "OTHER"
        assert tag_word("cake,") == "NOUN"


class TestTagDialogue:
    def test_counts_align(self):
        record = parse_dialogue_block("A: ok then\nB: I went home", "p1")
        tagged = tag_dialogue(record)
        assert tagged["id"] == "p1"
        assert [len(row) for row in tagged["tags"]] == [2, 3]

    def test_corpus_file(self, tmp_path):
        corpus = tmp_path / "corpus.jsonl"
        corpus.write_text(
            json.dumps({"id": "p1", "dialogue": "A: ok then\nB: nice cake"}) + "\n",
            encoding="utf-8",
        )
        out = tmp_path / "pos.jsonl"
        assert pos_tag_corpus(corpus, out) == 0
        rec = json.loads(out.read_text())
        assert rec["tags"] == [["OTHER", "OTHER"], ["ADJ", "NOUN"]]
