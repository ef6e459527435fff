"""The runner's outputs must satisfy the annotation toolkit's import
contracts end to end: score files load with zero errors and drive the
annotators; POS files drive the redundancy-rule baseline."""

import json

from dialog_annotate import (
    ALL_TASKS,
    HParams,
    annotate,
    import_scores,
    load_corpus,
    parse_dialogue,
    render_annotated,
)
from dialog_annotate.baselines import PosTaggedDialogue, load_pos_tags, rule_redundant

from dialog_annotate_runner.postag import pos_tag_corpus
from dialog_annotate_runner.scorer import RunnerConfig, score_corpus


def test_score_file_feeds_the_annotators(tiny_model_dir, corpus_file, tmp_path):
    scores_path = tmp_path / "scores.jsonl"
    failures = score_corpus(
        corpus_file,
        scores_path,
        RunnerConfig(model=tiny_model_dir, device="cpu", max_context=64, batch_size=2),
    )
    assert failures == 0

    bundles = import_scores(scores_path)  # validates the whole schema
    corpus = load_corpus(corpus_file)
    assert set(bundles) == {d.id for d, _ in corpus}

    for dialogue, _ in corpus:
        bundle = bundles[dialogue.id]
        assert bundle.utterance_count() == len(dialogue)
        annotated = annotate(
            dialogue, bundle, HParams(r_ke=30.0, t_rd=0.5, r_ts=30.0), ALL_TASKS
        )
        text = render_annotated(annotated)
        assert text.count("#KEY#") == 1


def test_pos_file_feeds_the_rule_baseline(tmp_path):
    corpus_path = tmp_path / "corpus.jsonl"
    corpus_path.write_text(
        json.dumps({"id": "p1", "dialogue": "A: ok then\nB: I baked a cake"}) + "\n",
        encoding="utf-8",
    )
    pos_path = tmp_path / "pos.jsonl"
    assert pos_tag_corpus(corpus_path, pos_path) == 0

    tags = load_pos_tags(pos_path)
    dialogue = parse_dialogue("A: ok then\nB: I baked a cake", "p1")
    tagged = PosTaggedDialogue(dialogue, tags["p1"])
    assert rule_redundant(tagged).indices == frozenset({1})
