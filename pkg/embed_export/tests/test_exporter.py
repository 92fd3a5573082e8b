import json

import numpy as np
import pytest

from embed_export.cli import main
from embed_export.exporter import (
    EncoderLoadError,
    ExportError,
    HashEncoder,
    export_embeddings,
    load_encoder,
)


def write_corpus(tmp_path, debates):
    corpus = tmp_path / "corpus"
    corpus.mkdir(exist_ok=True)
    for debate in debates:
        (corpus / f"{debate['id']}.json").write_text(
            json.dumps(debate), encoding="utf-8"
        )
    return corpus


def small_corpus(tmp_path):
    return write_corpus(
        tmp_path,
        [
            {
                "id": "deb1",
                "winner": "F",
                "adus": [
                    {"id": "n1", "text": "primer argument", "stance": "F",
                     "phase": "intro"},
                    {"id": "n2", "text": "segon argument", "stance": "A",
                     "phase": "arg"},
                    {"id": "n3", "text": "tercer argument", "stance": "F",
                     "phase": "concl"},
                ],
                "relations": [],
            }
        ],
    )


def test_export_writes_header_and_rows(tmp_path):
    corpus = small_corpus(tmp_path)
    out = tmp_path / "emb.txt"
    manifest = export_embeddings(corpus, "hash:768", out)
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "DIM 768"
    assert len(lines) == 1 + 3
    assert lines[1].startswith("deb1/n1\t")
    assert manifest.n_adus == 3
    assert manifest.n_debates == 1
    assert manifest.dimension == 768
    assert manifest.model_id == "hash:768"


def test_repeated_export_is_byte_identical(tmp_path):
    corpus = small_corpus(tmp_path)
    out1 = tmp_path / "a.txt"
    out2 = tmp_path / "b.txt"
    export_embeddings(corpus, "hash:768", out1)
    export_embeddings(corpus, "hash:768", out2)
    assert out1.read_bytes() == out2.read_bytes()


def test_round_trip_through_primary_loader(tmp_path):
    arbiter_samples = pytest.importorskip(
        "arbiter.samples", reason="primary package not installed"
    )
    corpus = small_corpus(tmp_path)
    out = tmp_path / "emb.txt"
    manifest = export_embeddings(corpus, "hash:768", out)
    table = arbiter_samples.load_embeddings(out)
    assert table.dimension == 768
    assert len(table) == manifest.n_adus
    for key, vector in table.vectors.items():
        assert key.startswith("deb1/")
        assert vector.shape == (768,)
        assert np.all(np.isfinite(vector))
        # 9 significant digits keep unit norms intact to ~1e-8
        assert abs(float(np.linalg.norm(vector)) - 1.0) < 1e-6


def test_rows_follow_corpus_order(tmp_path):
    corpus = write_corpus(
        tmp_path,
        [
            {"id": "b-second", "winner": "A",
             "adus": [{"id": "x", "text": "t", "stance": "A", "phase": "arg"}],
             "relations": []},
            {"id": "a-first", "winner": "F",
             "adus": [{"id": "y", "text": "t", "stance": "F", "phase": "arg"}],
             "relations": []},
        ],
    )
    out = tmp_path / "emb.txt"
    export_embeddings(corpus, "hash:8", out)
    keys = [line.split("\t")[0] for line in
            out.read_text().splitlines()[1:]]
    # filename order: a-first.json before b-second.json
    assert keys == ["a-first/y", "b-second/x"]


def test_empty_text_rejected(tmp_path):
    corpus = write_corpus(
        tmp_path,
        [{"id": "bad", "winner": "F",
          "adus": [{"id": "n1", "text": "   ", "stance": "F", "phase": "arg"}],
          "relations": []}],
    )
    with pytest.raises(ExportError, match="empty text"):
        export_embeddings(corpus, "hash:8", tmp_path / "emb.txt")


def test_duplicate_key_rejected(tmp_path):
    corpus = write_corpus(
        tmp_path,
        [{"id": "dup", "winner": "F",
          "adus": [
              {"id": "n1", "text": "a", "stance": "F", "phase": "arg"},
              {"id": "n1", "text": "b", "stance": "A", "phase": "arg"},
          ],
          "relations": []}],
    )
    with pytest.raises(ExportError, match="duplicate"):
        export_embeddings(corpus, "hash:8", tmp_path / "emb.txt")


def test_missing_corpus_dir(tmp_path):
    with pytest.raises(ExportError, match="does not exist"):
        export_embeddings(tmp_path / "nope", "hash:8", tmp_path / "emb.txt")


def test_encoder_shape_validated(tmp_path):
    corpus = small_corpus(tmp_path)

    class LyingEncoder(HashEncoder):
        def encode(self, texts):
            return np.zeros((len(texts), self.dimension + 1))

    with pytest.raises(ExportError, match="shape"):
        export_embeddings(
            corpus, "hash:8", tmp_path / "emb.txt", encoder=LyingEncoder(8)
        )


def test_non_finite_encoder_output_rejected(tmp_path):
    corpus = small_corpus(tmp_path)

    class NanEncoder(HashEncoder):
        def encode(self, texts):
            out = super().encode(texts)
            out[0, 0] = np.nan
            return out

    with pytest.raises(ExportError, match="non-finite"):
        export_embeddings(
            corpus, "hash:8", tmp_path / "emb.txt", encoder=NanEncoder(8)
        )


def test_load_encoder_hash_spec():
    encoder = load_encoder("hash:16")
    assert encoder.dimension == 16
    with pytest.raises(EncoderLoadError):
        load_encoder("hash:not-a-number")


def test_batching_does_not_change_output(tmp_path):
    corpus = write_corpus(
        tmp_path,
        [{"id": "many", "winner": "F",
          "adus": [
              {"id": f"n{i}", "text": f"text {i}", "stance": "F",
               "phase": "arg"}
              for i in range(10)
          ],
          "relations": []}],
    )
    out1 = tmp_path / "b1.txt"
    out2 = tmp_path / "b4.txt"
    export_embeddings(corpus, "hash:8", out1, batch_size=1)
    export_embeddings(corpus, "hash:8", out2, batch_size=4)
    assert out1.read_bytes() == out2.read_bytes()


def test_cli_smoke(tmp_path, capsys):
    corpus = small_corpus(tmp_path)
    out = tmp_path / "emb.txt"
    assert main(["--corpus", str(corpus), "--model", "hash:768",
                 "--out", str(out)]) == 0
    printed = capsys.readouterr().out
    assert "adus embedded: 3" in printed
    assert out.exists()


def test_cli_reports_errors(tmp_path, capsys):
    assert main(["--corpus", str(tmp_path / "missing"), "--model", "hash:8",
                 "--out", str(tmp_path / "emb.txt")]) == 2
    assert "error:" in capsys.readouterr().err
