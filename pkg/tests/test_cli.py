import hashlib
import json
from importlib import resources

import pytest

from taskforge.cli import main
from taskforge.corpus import document_to_record

from conftest import synth_corpus

TOY = resources.files("taskforge.data").joinpath("toy_corpus.jsonl")


@pytest.fixture
def toy_path(tmp_path):
    path = tmp_path / "toy.jsonl"
    path.write_text(TOY.read_text("utf-8"), encoding="utf-8")
    return str(path)


@pytest.fixture
def synth_path(tmp_path):
    path = tmp_path / "synth.jsonl"
    with path.open("w", encoding="utf-8") as fh:
        for doc in synth_corpus(40, seed=11):
            fh.write(json.dumps(document_to_record(doc)) + "\n")
    return str(path)


class TestStats:
    def test_toy_corpus_hand_counts(self, toy_path, tmp_path, capsys):
        assert main(["stats", toy_path]) == 0
        stats = json.loads(capsys.readouterr().out)
        assert stats == {"n_docs": 10, "mean_words": 6.8, "mean_sentences": 2.0}

    def test_empty_corpus_exit_2(self, tmp_path, capsys):
        empty = tmp_path / "empty.jsonl"
        empty.write_text("")
        assert main(["stats", str(empty)]) == 2
        assert "empty corpus" in capsys.readouterr().err

    def test_missing_file_exit_2(self, capsys):
        assert main(["stats", "/nonexistent/corpus.jsonl"]) == 2

    def test_malformed_line_reported(self, tmp_path, capsys):
        bad = tmp_path / "bad.jsonl"
        bad.write_text('{"id":"a","title":"t","target":"x."}\n{broken\n')
        assert main(["stats", str(bad)]) == 2
        assert "line 2" in capsys.readouterr().err


class TestForge:
    def test_six_lines_per_full_doc(self, synth_path, tmp_path):
        out = tmp_path / "samples.jsonl"
        assert main(["forge", synth_path, "--seed", "42", "-o", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 240
        report = json.loads((tmp_path / "samples.jsonl.report.json").read_text())
        assert report["seed"] == 42
        assert all(v == 40 for v in report["kind_counts"].values())

    def test_kind_filter(self, synth_path, tmp_path):
        out = tmp_path / "e2e.jsonl"
        assert main(["forge", synth_path, "--seed", "1",
                     "--kinds", "end_to_end", "-o", str(out)]) == 0
        lines = [json.loads(l) for l in out.read_text().splitlines()]
        assert len(lines) == 40
        assert all(l["kind"] == "end_to_end" for l in lines)

    def test_seed_required(self, synth_path, capsys):
        assert main(["forge", synth_path]) == 2
        assert "--seed is required" in capsys.readouterr().err

    def test_deterministic_across_invocations(self, synth_path, tmp_path):
        digests = []
        for name in ("a.jsonl", "b.jsonl"):
            out = tmp_path / name
            assert main(["forge", synth_path, "--seed", "9", "-o", str(out)]) == 0
            digests.append(hashlib.sha256(out.read_bytes()).hexdigest())
        assert digests[0] == digests[1]

    def test_config_file_supplies_flags(self, synth_path, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"seed": 5, "kinds": "end_to_end"}))
        out = tmp_path / "cfg.jsonl"
        assert main(["forge", synth_path, "--config", str(config), "-o", str(out)]) == 0
        assert len(out.read_text().splitlines()) == 40

    def test_flags_override_config(self, synth_path, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"seed": 5, "kinds": "end_to_end"}))
        out = tmp_path / "cfg.jsonl"
        assert main(["forge", synth_path, "--config", str(config),
                     "--kinds", "end_to_end,plan", "-o", str(out)]) == 0
        assert len(out.read_text().splitlines()) == 80


class TestSample:
    def test_subset_size_and_order(self, synth_path, tmp_path, capsys):
        assert main(["sample", synth_path, "--fraction", "0.25", "--seed", "3"]) == 0
        lines = [json.loads(l) for l in capsys.readouterr().out.splitlines()]
        assert len(lines) == 10
        ids = [l["id"] for l in lines]
        assert ids == sorted(ids)

    def test_fraction_required(self, synth_path, capsys):
        assert main(["sample", synth_path, "--seed", "3"]) == 2


class TestEval:
    def test_line_aligned_files(self, tmp_path, capsys):
        hyp = tmp_path / "hyp.txt"
        ref = tmp_path / "ref.txt"
        hyp.write_text("a b c d\n")
        ref.write_text("a b c d\n")
        assert main(["eval", "--hyp", str(hyp), "--ref", str(ref)]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["bleu3"] == pytest.approx(100.0)
        assert report["mean_len_words"] == 4.0

    def test_jsonl_input(self, tmp_path, capsys):
        pairs = tmp_path / "pairs.jsonl"
        pairs.write_text(json.dumps({"hypothesis": "a b c", "reference": "a c d"}) + "\n")
        assert main(["eval", "--jsonl", str(pairs)]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["rouge_l_f"] == pytest.approx(200 / 3)

    def test_length_mismatch_exit_2(self, tmp_path, capsys):
        hyp = tmp_path / "hyp.txt"
        ref = tmp_path / "ref.txt"
        hyp.write_text("a\nb\n")
        ref.write_text("a\n")
        assert main(["eval", "--hyp", str(hyp), "--ref", str(ref)]) == 2


class TestSignatures:
    def test_tsv_sorted_by_score(self, tmp_path, capsys):
        corpus = tmp_path / "corpus.jsonl"
        corpus.write_text(json.dumps(
            {"id": "a", "title": "t", "target": "storm storm storm surge."}) + "\n")
        background = tmp_path / "background.tsv"
        background.write_text("storm\t1\nthe\t200\nsurge\t2\n")
        assert main(["signatures", str(corpus), "--background", str(background)]) == 0
        rows = [line.split("\t") for line in capsys.readouterr().out.splitlines()]
        scores = [float(s) for _, s in rows]
        assert scores == sorted(scores, reverse=True)
        # LLR is direction-symmetric, so background-heavy words rank too;
        # the foreground-elevated word must outrank its foreground peers
        order = [w for w, _ in rows]
        assert order.index("storm") < order.index("surge")

    def test_background_required(self, tmp_path, capsys):
        corpus = tmp_path / "corpus.jsonl"
        corpus.write_text(json.dumps({"id": "a", "title": "t", "target": "x."}) + "\n")
        assert main(["signatures", str(corpus)]) == 2


def test_unknown_flag_exits_2(toy_path):
    with pytest.raises(SystemExit) as exc:
        main(["stats", toy_path, "--bogus"])
    assert exc.value.code == 2
