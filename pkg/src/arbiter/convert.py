"""Converter from tabular debate annotations to the canonical JSON model.

Published debate annotations usually arrive as one spreadsheet per
debate: one row per ADU carrying its text, team/stance, phase, and the
relations leaving it.  This converter accepts that layout as CSV with
a tolerant set of column aliases, and reports (rather than silently
resolves) suspicious structures such as inference or rephrase
relations that cross stances.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from .corpus import ADU, Debate, Phase, Relation, RelationKind, Stance

__all__ = ["ConversionError", "ConversionResult", "convert_tabular_debate"]

_COLUMN_ALIASES = {
    "id": ("id", "adu_id", "adu", "node_id", "node"),
    "text": ("text", "adu_text", "proposition", "content"),
    "stance": ("stance", "team", "side", "position"),
    "phase": ("phase", "stage", "section"),
    "targets": ("target", "targets", "related_to", "relatedto", "related"),
    "kinds": ("kind", "kinds", "relation_type", "relationtype", "relation",
              "relations"),
}

_STANCE_ALIASES = {
    "f": Stance.FAVOUR,
    "fav": Stance.FAVOUR,
    "favour": Stance.FAVOUR,
    "favor": Stance.FAVOUR,
    "a favor": Stance.FAVOUR,
    "pro": Stance.FAVOUR,
    "for": Stance.FAVOUR,
    "a": Stance.AGAINST,
    "against": Stance.AGAINST,
    "en contra": Stance.AGAINST,
    "contra": Stance.AGAINST,
    "con": Stance.AGAINST,
}

_KIND_ALIASES = {
    "inference": RelationKind.INFERENCE,
    "inf": RelationKind.INFERENCE,
    "ra": RelationKind.INFERENCE,
    "support": RelationKind.INFERENCE,
    "conflict": RelationKind.CONFLICT,
    "conf": RelationKind.CONFLICT,
    "ca": RelationKind.CONFLICT,
    "attack": RelationKind.CONFLICT,
    "rephrase": RelationKind.REPHRASE,
    "reph": RelationKind.REPHRASE,
    "ma": RelationKind.REPHRASE,
    "restatement": RelationKind.REPHRASE,
}


class ConversionError(ValueError):
    """The tabular file cannot be mapped onto the debate model."""


@dataclass(frozen=True)
class ConversionResult:
    debate: Debate
    warnings: tuple[str, ...]


def _parse_stance(raw: str) -> Stance:
    stance = _STANCE_ALIASES.get(raw.strip().lower())
    if stance is None:
        raise ConversionError(f"unrecognized stance value {raw!r}")
    return stance


def _parse_phase(raw: str) -> Phase:
    lowered = raw.strip().lower()
    for phase, prefixes in (
        (Phase.INTRODUCTION, ("intro", "i", "opening")),
        (Phase.CONCLUSION, ("concl", "c", "closing", "final")),
        (Phase.ARGUMENTATION, ("arg", "a", "rebuttal", "body")),
    ):
        if any(lowered == p or lowered.startswith(p) for p in prefixes):
            return phase
    raise ConversionError(f"unrecognized phase value {raw!r}")


def _parse_kind(raw: str) -> RelationKind:
    kind = _KIND_ALIASES.get(raw.strip().lower())
    if kind is None:
        raise ConversionError(f"unrecognized relation kind {raw!r}")
    return kind


def _split_multi(raw: str) -> list[str]:
    cleaned = raw.replace(";", ",")
    return [part.strip() for part in cleaned.split(",") if part.strip()]


def _resolve_columns(fieldnames: list[str]) -> dict[str, str]:
    resolved: dict[str, str] = {}
    lowered = {name.strip().lower(): name for name in fieldnames}
    for canonical, aliases in _COLUMN_ALIASES.items():
        for alias in aliases:
            if alias in lowered:
                resolved[canonical] = lowered[alias]
                break
    missing = {"id", "text", "stance", "phase"} - set(resolved)
    if missing:
        raise ConversionError(
            f"missing required column(s) {sorted(missing)}; "
            f"found {fieldnames}"
        )
    return resolved


def convert_tabular_debate(
    path: str | Path, *, debate_id: str | None = None, winner: str | Stance
) -> ConversionResult:
    """Convert one CSV of ADU rows into a validated Debate.

    The winner label lives in a separate jury sheet upstream, so it is
    passed explicitly.  Relation targets/kinds may be multi-valued
    (comma or semicolon separated, aligned pairwise).
    """
    path = Path(path)
    if isinstance(winner, str):
        winner = _parse_stance(winner)
    if debate_id is None:
        debate_id = path.stem

    adus: list[ADU] = []
    relations: list[Relation] = []
    warnings: list[str] = []
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if not reader.fieldnames:
            raise ConversionError(f"{path}: empty file")
        columns = _resolve_columns(list(reader.fieldnames))
        for row_number, row in enumerate(reader, start=2):
            adu_id = (row[columns["id"]] or "").strip()
            if not adu_id:
                raise ConversionError(f"{path}:{row_number}: missing ADU id")
            adus.append(
                ADU(
                    id=adu_id,
                    text=(row[columns["text"]] or "").strip(),
                    stance=_parse_stance(row[columns["stance"]] or ""),
                    phase=_parse_phase(row[columns["phase"]] or ""),
                    debate_id=debate_id,
                )
            )
            targets = _split_multi(row.get(columns.get("targets", ""), "") or "")
            kinds = _split_multi(row.get(columns.get("kinds", ""), "") or "")
            if len(targets) != len(kinds):
                raise ConversionError(
                    f"{path}:{row_number}: {len(targets)} relation target(s) "
                    f"but {len(kinds)} kind(s)"
                )
            for target, kind in zip(targets, kinds):
                relations.append(
                    Relation(source=adu_id, target=target, kind=_parse_kind(kind))
                )

    debate = Debate(
        id=debate_id,
        adus=tuple(adus),
        relations=tuple(relations),
        winner=winner,
    )
    stance_of = {adu.id: adu.stance for adu in debate.adus}
    for rel in debate.relations:
        if rel.kind is not RelationKind.CONFLICT and (
            stance_of[rel.source] is not stance_of[rel.target]
        ):
            warnings.append(
                f"{rel.kind.value} relation {rel.source} -> {rel.target} "
                "crosses stances"
            )
    return ConversionResult(debate=debate, warnings=tuple(warnings))
