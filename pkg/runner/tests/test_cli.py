import json

from dialog_annotate_runner.cli import main


def test_score_subcommand(tiny_model_dir, corpus_file, tmp_path):
    out = tmp_path / "scores.jsonl"
    code = main(
        [
            "score",
            "--input", str(corpus_file),
            "--output", str(out),
            "--model", tiny_model_dir,
            "--max-context", "64",
            "--batch-size", "2",
        ]
    )
    assert code == 0
    first = json.loads(out.read_text().splitlines()[0])
    assert first["schema"] == 1 and first["pairs"]


def test_pos_subcommand(corpus_file, tmp_path):
    out = tmp_path / "pos.jsonl"
    assert main(["pos", "--input", str(corpus_file), "--output", str(out)]) == 0
    recs = [json.loads(line) for line in out.read_text().splitlines()]
    assert len(recs) == 3
    assert all("tags" in r for r in recs)
