import json

import pytest

from arbiter.convert import ConversionError, convert_tabular_debate
from arbiter.corpus import (
    DebateParseError,
    DebateValidationError,
    Stance,
    corpus_stats,
    debate_from_dict,
    load_corpus,
    load_debate,
    save_debate,
)
from conftest import make_debate
from arbiter.corpus import RelationKind


def write_debate(tmp_path, payload, name="debate.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


EMPTY = {"id": "d0", "winner": "F", "adus": [], "relations": []}

TWO_ADUS = {
    "id": "d1",
    "winner": "A",
    "adus": [
        {"id": "p", "text": "claim", "stance": "F", "phase": "intro"},
        {"id": "q", "text": "objection", "stance": "A", "phase": "arg"},
    ],
    "relations": [{"source": "p", "target": "q", "kind": "conflict"}],
}


def test_load_empty_debate(tmp_path):
    debate = load_debate(write_debate(tmp_path, EMPTY))
    assert debate.id == "d0"
    assert debate.adus == ()
    assert debate.relations == ()
    assert debate.winner is Stance.FAVOUR


def test_load_minimal_debate(tmp_path):
    debate = load_debate(write_debate(tmp_path, TWO_ADUS))
    assert len(debate.adus) == 2
    assert len(debate.relations) == 1
    assert debate.relations[0].kind is RelationKind.CONFLICT
    assert debate.winner is Stance.AGAINST


def test_dangling_relation_names_offender(tmp_path):
    payload = dict(TWO_ADUS)
    payload["relations"] = [{"source": "p", "target": "x9", "kind": "conflict"}]
    with pytest.raises(DebateValidationError, match="x9"):
        load_debate(write_debate(tmp_path, payload))


def test_duplicate_adu_id_rejected():
    payload = dict(TWO_ADUS)
    payload["adus"] = [
        {"id": "p", "text": "one", "stance": "F", "phase": "intro"},
        {"id": "p", "text": "two", "stance": "A", "phase": "arg"},
    ]
    payload["relations"] = []
    with pytest.raises(DebateValidationError, match="duplicate"):
        debate_from_dict(payload)


def test_self_relation_rejected():
    payload = dict(TWO_ADUS)
    payload["relations"] = [{"source": "p", "target": "p", "kind": "inference"}]
    with pytest.raises(DebateValidationError, match="self-relation"):
        debate_from_dict(payload)


def test_empty_text_rejected():
    payload = dict(TWO_ADUS)
    payload["adus"] = [{"id": "p", "text": "  ", "stance": "F", "phase": "intro"}]
    payload["relations"] = []
    with pytest.raises(DebateValidationError, match="empty text"):
        debate_from_dict(payload)


@pytest.mark.parametrize(
    "field,value",
    [("stance", "X"), ("phase", "middle")],
)
def test_bad_enum_rejected(field, value):
    payload = dict(TWO_ADUS)
    adu = dict(payload["adus"][0])
    adu[field] = value
    payload["adus"] = [adu]
    payload["relations"] = []
    with pytest.raises(DebateParseError):
        debate_from_dict(payload)


def test_bad_json_is_parse_error(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(DebateParseError):
        load_debate(path)


def test_save_load_round_trip(tmp_path):
    debate = make_debate(
        [("a", Stance.FAVOUR), ("b", Stance.AGAINST)],
        [("a", "b", RelationKind.CONFLICT)],
        debate_id="rt",
        winner=Stance.AGAINST,
    )
    path = tmp_path / "rt.json"
    save_debate(debate, path)
    assert load_debate(path) == debate


def test_corpus_stats_empty():
    report = corpus_stats([])
    assert (report.n_debates, report.n_adus, report.n_words) == (0, 0, 0)
    assert report.winners == {}


def test_corpus_stats_counts():
    d1 = make_debate(
        [("a", Stance.FAVOUR)], debate_id="d1", winner=Stance.FAVOUR
    )
    d2 = make_debate(
        [("a", Stance.FAVOUR), ("b", Stance.AGAINST)],
        debate_id="d2",
        winner=Stance.AGAINST,
    )
    report = corpus_stats([d1, d2])
    assert report.n_debates == 2
    assert report.n_adus == 3
    # every generated ADU text is "text of <id>" = 3 words
    assert report.n_words == 9
    assert report.winners == {"F": 1, "A": 1}
    assert "2" in report.to_text()


def test_load_corpus_sorted(tmp_path):
    for name, payload in [("b.json", TWO_ADUS), ("a.json", EMPTY)]:
        write_debate(tmp_path, payload, name)
    debates = load_corpus(tmp_path)
    assert [d.id for d in debates] == ["d0", "d1"]


def test_load_corpus_missing_dir(tmp_path):
    with pytest.raises(DebateParseError):
        load_corpus(tmp_path / "nope")


def test_convert_tabular_debate(tmp_path):
    path = tmp_path / "deb01.csv"
    path.write_text(
        "ID,TEXT,TEAM,PHASE,RELATED_TO,RELATION_TYPE\n"
        "n1,opening claim,A favor,Introduction,,\n"
        "n2,supporting reason,favour,Argumentation,n1,inference\n"
        "n3,counterpoint,En contra,Argumentation,n2,conflict\n"
        'n4,"restated, stronger",contra,Conclusion,"n3;n2","rephrase,conflict"\n',
        encoding="utf-8",
    )
    result = convert_tabular_debate(path, winner="A")
    debate = result.debate
    assert debate.id == "deb01"
    assert [a.id for a in debate.adus] == ["n1", "n2", "n3", "n4"]
    assert debate.adus[0].stance is Stance.FAVOUR
    assert debate.adus[2].stance is Stance.AGAINST
    kinds = [r.kind for r in debate.relations]
    assert kinds == [
        RelationKind.INFERENCE,
        RelationKind.CONFLICT,
        RelationKind.REPHRASE,
        RelationKind.CONFLICT,
    ]
    assert debate.winner is Stance.AGAINST
    # the rephrase n4 -> n3 stays within stance, so no warning for it;
    # nothing crosses stances via inference/rephrase here
    assert result.warnings == ()


def test_convert_reports_cross_stance_inference(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text(
        "id,text,stance,phase,target,kind\n"
        "x1,pro point,F,intro,,\n"
        "x2,con point,A,arg,x1,inference\n",
        encoding="utf-8",
    )
    result = convert_tabular_debate(path, winner="F")
    assert len(result.warnings) == 1
    assert "crosses stances" in result.warnings[0]


def test_convert_rejects_mismatched_relation_columns(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text(
        "id,text,stance,phase,target,kind\n"
        "x1,pro,F,intro,,\n"
        "x2,con,A,arg,\"x1,x1\",inference\n",
        encoding="utf-8",
    )
    with pytest.raises(ConversionError, match="kind"):
        convert_tabular_debate(path, winner="F")


def test_convert_missing_columns(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("id,text\nx,y\n", encoding="utf-8")
    with pytest.raises(ConversionError, match="missing required column"):
        convert_tabular_debate(path, winner="F")
