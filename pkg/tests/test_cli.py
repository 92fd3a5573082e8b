import json

import pytest

import arbiter.cli as cli
from arbiter.cli import EXIT_OK, EXIT_RESOURCE_CAP, EXIT_VALIDATION, main
from arbiter.corpus import save_debate
from arbiter.samples import save_embeddings
from arbiter.semantics import EnumerationCapError
from arbiter.synthetic import generate_synthetic_corpus


@pytest.fixture
def corpus_dir(tmp_path):
    debates, table = generate_synthetic_corpus(6, 1.0, seed=20)
    directory = tmp_path / "corpus"
    directory.mkdir()
    for debate in debates:
        save_debate(debate, directory / f"{debate.id}.json")
    emb_path = tmp_path / "embeddings.txt"
    save_embeddings(table, emb_path)
    return directory, emb_path, debates


def test_validate_ok(corpus_dir, capsys):
    directory, _, debates = corpus_dir
    paths = sorted(str(p) for p in directory.glob("*.json"))
    assert main(["validate", *paths]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.count(": ok") == len(debates)


def test_validate_bad_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"id": "x", "winner": "F", "adus": [], '
                   '"relations": [{"source": "a", "target": "b", '
                   '"kind": "conflict"}]}', encoding="utf-8")
    assert main(["validate", str(bad)]) == EXIT_VALIDATION
    assert "INVALID" in capsys.readouterr().out


def test_stats(corpus_dir, capsys):
    directory, _, debates = corpus_dir
    assert main(["stats", str(directory)]) == EXIT_OK
    assert f"debates: {len(debates)}" in capsys.readouterr().out


def test_encode_summary_and_apx(corpus_dir, tmp_path, capsys):
    directory, _, debates = corpus_dir
    debate_path = sorted(directory.glob("*.json"))[0]
    apx_path = tmp_path / "out.apx"
    assert main(["encode", str(debate_path), "--apx", str(apx_path),
                 "--summary"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "|A|=" in out
    text = apx_path.read_text()
    assert text.startswith("arg(")


def test_solve_debate_json(corpus_dir, capsys):
    directory, _, _ = corpus_dir
    debate_path = sorted(directory.glob("*.json"))[0]
    assert main(["solve", str(debate_path), "--semantics", "naive"]) == EXIT_OK
    extensions = json.loads(capsys.readouterr().out)
    assert isinstance(extensions, list) and extensions
    assert all(ids == sorted(ids) for ids in extensions)


def test_solve_apx_with_oracle(tmp_path, capsys):
    apx = tmp_path / "af.apx"
    apx.write_text("arg(a).\narg(b).\natt(a,b).\natt(b,a).\n", encoding="utf-8")
    assert main(["solve", str(apx), "--semantics", "preferred"]) == EXIT_OK
    fast = json.loads(capsys.readouterr().out)
    assert main(["solve", str(apx), "--semantics", "preferred",
                 "--oracle"]) == EXIT_OK
    oracle = json.loads(capsys.readouterr().out)
    assert fast == oracle == [[0], [1]]


def test_solve_resource_cap_exit_code(monkeypatch, corpus_dir, capsys):
    directory, _, _ = corpus_dir
    debate_path = sorted(directory.glob("*.json"))[0]

    def explode(af, **kwargs):
        raise EnumerationCapError("x", "more than 0 extensions")

    monkeypatch.setattr(cli, "naive_extensions", explode)
    assert main(["solve", str(debate_path), "--semantics", "naive"]) \
        == EXIT_RESOURCE_CAP
    assert "error" in capsys.readouterr().err


def test_convert(tmp_path, capsys):
    csv_path = tmp_path / "deb.csv"
    csv_path.write_text(
        "id,text,stance,phase,target,kind\n"
        "p1,za,F,intro,,\n"
        "p2,contra,A,arg,p1,conflict\n",
        encoding="utf-8",
    )
    out = tmp_path / "deb.json"
    assert main(["convert", str(csv_path), "--winner", "F",
                 "--out", str(out)]) == EXIT_OK
    assert main(["validate", str(out)]) == EXIT_OK


def test_build_train_predict_chain(corpus_dir, tmp_path, capsys):
    directory, emb_path, debates = corpus_dir
    samples_path = tmp_path / "samples.json"
    assert main(["build-samples", str(directory), "--semantics", "naive",
                 "--embeddings", str(emb_path),
                 "--out", str(samples_path)]) == EXIT_OK
    capsys.readouterr()

    config = tmp_path / "train.toml"
    config.write_text(
        "learning_rate = 0.01\nepochs = 2\nbatch_size = 1\nseed = 0\n",
        encoding="utf-8",
    )
    model_path = tmp_path / "model.ckpt"
    assert main(["train", "--samples", str(samples_path),
                 "--config", str(config), "--out", str(model_path)]) == EXIT_OK
    capsys.readouterr()

    assert main(["predict", "--model", str(model_path),
                 "--samples", str(samples_path)]) == EXIT_OK
    results = json.loads(capsys.readouterr().out)
    assert set(results) == {d.id for d in debates}
    for entry in results.values():
        assert entry["winner"] in ("F", "A")
        assert 0.0 < entry["confidence"] <= 1.0


def test_run_experiment_cli(corpus_dir, tmp_path, capsys):
    directory, emb_path, _ = corpus_dir
    config = tmp_path / "experiment.toml"
    config.write_text(
        f'corpus_dir = "{directory}"\n'
        f'embeddings_path = "{emb_path}"\n'
        "runs = 1\n"
        "seed = 0\n"
        'models = ["rb", "naive-atb", "longformer"]\n',
        encoding="utf-8",
    )
    json_out = tmp_path / "report.json"
    assert main(["run", "--config", str(config),
                 "--json-out", str(json_out)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "not implemented" in out
    payload = json.loads(json_out.read_text())
    assert payload["n_debates"] == 6


def test_run_missing_corpus_is_validation_error(tmp_path, capsys):
    config = tmp_path / "experiment.toml"
    config.write_text('corpus_dir = "/nonexistent"\nmodels = ["rb"]\n',
                      encoding="utf-8")
    assert main(["run", "--config", str(config)]) == EXIT_VALIDATION


def test_version(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["--version"])
    assert excinfo.value.code == 0
