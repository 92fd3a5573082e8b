"""Data model for annotated debates.

A debate is a list of argumentative discourse units (ADUs), each with a
stance and a debate phase, connected by typed directed relations
(inference / conflict / rephrase), plus a single binary winner label.
Debates are stored on disk as JSON (see `load_debate` for the schema).
All types are immutable after construction and safe to share read-only
across workers.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

__all__ = [
    "Stance",
    "Phase",
    "RelationKind",
    "ADU",
    "Relation",
    "Debate",
    "StatsReport",
    "DebateParseError",
    "DebateValidationError",
    "debate_from_dict",
    "debate_to_dict",
    "load_debate",
    "save_debate",
    "load_corpus",
    "corpus_stats",
]


class Stance(Enum):
    """Side of the debated topic an ADU (or abstract argument) supports."""

    FAVOUR = "F"
    AGAINST = "A"

    @property
    def class_index(self) -> int:
        """Classification target: 0 for Favour, 1 for Against."""
        return 0 if self is Stance.FAVOUR else 1


class Phase(Enum):
    """Debate phase in which an ADU was uttered."""

    INTRODUCTION = "intro"
    ARGUMENTATION = "arg"
    CONCLUSION = "concl"


class RelationKind(Enum):
    """Type of a directed relation between two ADUs."""

    INFERENCE = "inference"
    CONFLICT = "conflict"
    REPHRASE = "rephrase"


class DebateParseError(ValueError):
    """A debate file is not syntactically valid (bad JSON, wrong types)."""


class DebateValidationError(ValueError):
    """A structurally parseable debate violates a model invariant."""


@dataclass(frozen=True)
class ADU:
    """A minimal span of argumentative text with stance and phase."""

    id: str
    text: str
    stance: Stance
    phase: Phase
    debate_id: str

    def word_count(self) -> int:
        return len(self.text.split())


@dataclass(frozen=True)
class Relation:
    """Directed typed relation between two ADUs of the same debate."""

    source: str
    target: str
    kind: RelationKind


@dataclass(frozen=True)
class Debate:
    """A complete annotated debate with its winner label.

    `adus` and `relations` are stored as tuples so instances are
    hashable and safely shareable between workers.
    """

    id: str
    adus: tuple[ADU, ...]
    relations: tuple[Relation, ...]
    winner: Stance

    def __post_init__(self) -> None:
        validate_debate(self)

    @property
    def adu_by_id(self) -> dict[str, ADU]:
        return {adu.id: adu for adu in self.adus}

    def relations_of_kind(self, kind: RelationKind) -> tuple[Relation, ...]:
        return tuple(r for r in self.relations if r.kind is kind)


def validate_debate(debate: Debate) -> None:
    """Check all model invariants, raising on the first violation.

    Raises
    ------
    DebateValidationError
        Naming the offending ADU id / relation endpoint.
    """
    seen: set[str] = set()
    for adu in debate.adus:
        if adu.id in seen:
            raise DebateValidationError(
                f"debate {debate.id!r}: duplicate ADU id {adu.id!r}"
            )
        seen.add(adu.id)
        if not adu.text.strip():
            raise DebateValidationError(
                f"debate {debate.id!r}: ADU {adu.id!r} has empty text"
            )
        if adu.debate_id != debate.id:
            raise DebateValidationError(
                f"debate {debate.id!r}: ADU {adu.id!r} belongs to "
                f"debate {adu.debate_id!r}"
            )
    for rel in debate.relations:
        for endpoint in (rel.source, rel.target):
            if endpoint not in seen:
                raise DebateValidationError(
                    f"debate {debate.id!r}: relation endpoint {endpoint!r} "
                    "does not match any ADU"
                )
        if rel.source == rel.target:
            raise DebateValidationError(
                f"debate {debate.id!r}: self-relation on ADU {rel.source!r}"
            )


def _parse_enum(cls, value, what: str):
    try:
        return cls(value)
    except ValueError:
        valid = ", ".join(repr(m.value) for m in cls)
        raise DebateParseError(
            f"invalid {what} {value!r} (expected one of {valid})"
        ) from None


def debate_from_dict(data: dict) -> Debate:
    """Build a validated Debate from the canonical JSON object layout.

    Schema: ``{"id", "winner": "F"|"A", "adus": [{"id", "text",
    "stance": "F"|"A", "phase": "intro"|"arg"|"concl"}],
    "relations": [{"source", "target",
    "kind": "inference"|"conflict"|"rephrase"}]}``.
    """
    if not isinstance(data, dict):
        raise DebateParseError("debate document must be a JSON object")
    try:
        debate_id = data["id"]
        winner_raw = data["winner"]
        adus_raw = data.get("adus", [])
        relations_raw = data.get("relations", [])
    except KeyError as exc:
        raise DebateParseError(f"missing required key {exc.args[0]!r}") from None
    if not isinstance(debate_id, str):
        raise DebateParseError("debate 'id' must be a string")
    winner = _parse_enum(Stance, winner_raw, "winner")

    adus = []
    for entry in adus_raw:
        if not isinstance(entry, dict):
            raise DebateParseError("each ADU must be a JSON object")
        try:
            adu = ADU(
                id=str(entry["id"]),
                text=str(entry["text"]),
                stance=_parse_enum(Stance, entry["stance"], "stance"),
                phase=_parse_enum(Phase, entry["phase"], "phase"),
                debate_id=debate_id,
            )
        except KeyError as exc:
            raise DebateParseError(
                f"ADU missing required key {exc.args[0]!r}"
            ) from None
        adus.append(adu)

    relations = []
    for entry in relations_raw:
        if not isinstance(entry, dict):
            raise DebateParseError("each relation must be a JSON object")
        try:
            rel = Relation(
                source=str(entry["source"]),
                target=str(entry["target"]),
                kind=_parse_enum(RelationKind, entry["kind"], "relation kind"),
            )
        except KeyError as exc:
            raise DebateParseError(
                f"relation missing required key {exc.args[0]!r}"
            ) from None
        relations.append(rel)

    return Debate(
        id=debate_id,
        adus=tuple(adus),
        relations=tuple(relations),
        winner=winner,
    )


def debate_to_dict(debate: Debate) -> dict:
    """Inverse of `debate_from_dict` (round-trips exactly)."""
    return {
        "id": debate.id,
        "winner": debate.winner.value,
        "adus": [
            {
                "id": adu.id,
                "text": adu.text,
                "stance": adu.stance.value,
                "phase": adu.phase.value,
            }
            for adu in debate.adus
        ],
        "relations": [
            {"source": r.source, "target": r.target, "kind": r.kind.value}
            for r in debate.relations
        ],
    }


def load_debate(path: str | Path) -> Debate:
    """Load and validate one canonical debate JSON file.

    Deterministic: the same bytes always produce the same Debate.
    Raises DebateParseError for malformed files and
    DebateValidationError naming the first violated invariant.
    """
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DebateParseError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise DebateParseError(f"{path}: not valid JSON: {exc}") from exc
    return debate_from_dict(data)


def save_debate(debate: Debate, path: str | Path) -> None:
    """Write a debate in the canonical JSON layout (UTF-8)."""
    path = Path(path)
    path.write_text(
        json.dumps(debate_to_dict(debate), ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8",
    )


def load_corpus(directory: str | Path) -> list[Debate]:
    """Load every ``*.json`` debate under `directory`, sorted by filename."""
    directory = Path(directory)
    if not directory.is_dir():
        raise DebateParseError(f"corpus directory {directory} does not exist")
    paths = sorted(directory.glob("*.json"))
    return [load_debate(p) for p in paths]


@dataclass(frozen=True)
class StatsReport:
    """Corpus-level counts used for sanity checks and reporting."""

    n_debates: int
    n_adus: int
    n_words: int
    winners: dict[str, int] = field(default_factory=dict)

    def to_text(self) -> str:
        favour = self.winners.get(Stance.FAVOUR.value, 0)
        against = self.winners.get(Stance.AGAINST.value, 0)
        return (
            f"debates: {self.n_debates}\n"
            f"adus: {self.n_adus}\n"
            f"words: {self.n_words}\n"
            f"winners: {favour} favour / {against} against\n"
        )


def corpus_stats(debates: Sequence[Debate] | Iterable[Debate]) -> StatsReport:
    """Count debates, ADUs, whitespace-separated words, and winners."""
    debates = list(debates)
    winners = Counter(d.winner.value for d in debates)
    return StatsReport(
        n_debates=len(debates),
        n_adus=sum(len(d.adus) for d in debates),
        n_words=sum(adu.word_count() for d in debates for adu in d.adus),
        winners=dict(winners),
    )
