"""Encoding of debates into abstract argumentation frameworks.

ADUs connected by inference or rephrase relations (ignoring direction)
form one abstract argument each; conflict relations between ADUs become
attacks between the corresponding arguments.  Conflicts inside a single
argument yield self-attacks, which are kept and reported.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .corpus import Debate, RelationKind, Stance

__all__ = [
    "AbstractArgument",
    "ArgumentationFramework",
    "StanceTieError",
    "encode_af",
    "af_summary",
]


class StanceTieError(ValueError):
    """A merged ADU group has no majority stance."""


@dataclass(frozen=True)
class AbstractArgument:
    """A group of ADUs following one line of reasoning."""

    id: int
    adu_ids: frozenset[str]
    stance: Stance


@dataclass(frozen=True)
class ArgumentationFramework:
    """Dung-style framework: abstract arguments plus an attack relation."""

    debate_id: str
    arguments: tuple[AbstractArgument, ...]
    attacks: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        ids = {a.id for a in self.arguments}
        for s, t in self.attacks:
            if s not in ids or t not in ids:
                raise ValueError(f"attack ({s},{t}) references unknown argument")

    @property
    def argument_ids(self) -> frozenset[int]:
        return frozenset(a.id for a in self.arguments)

    def argument(self, arg_id: int) -> AbstractArgument:
        return self.arguments[arg_id]

    def self_attacks(self) -> frozenset[int]:
        return frozenset(s for s, t in self.attacks if s == t)

    def attackers_of(self) -> dict[int, set[int]]:
        """Map argument id -> set of ids attacking it."""
        result: dict[int, set[int]] = {a.id: set() for a in self.arguments}
        for s, t in self.attacks:
            result[t].add(s)
        return result

    def targets_of(self) -> dict[int, set[int]]:
        """Map argument id -> set of ids it attacks."""
        result: dict[int, set[int]] = {a.id: set() for a in self.arguments}
        for s, t in self.attacks:
            result[s].add(t)
        return result


class _UnionFind:
    def __init__(self, items):
        self.parent = {item: item for item in items}

    def find(self, item):
        root = item
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[item] != root:
            self.parent[item], item = root, self.parent[item]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _majority_stance(debate_id: str, members: list[str], stances: Counter) -> Stance:
    favour = stances[Stance.FAVOUR]
    against = stances[Stance.AGAINST]
    if favour == against:
        raise StanceTieError(
            f"debate {debate_id!r}: ADU group {sorted(members)} has "
            f"{favour} favour vs {against} against members and no majority"
        )
    return Stance.FAVOUR if favour > against else Stance.AGAINST


def encode_af(debate: Debate) -> ArgumentationFramework:
    """Collapse a debate into an abstract argumentation framework.

    Arguments are the weakly-connected components of the debate graph
    once conflict relations are removed (isolated ADUs are singleton
    components); every conflict relation lifts to one attack between
    the enclosing components, deduplicated.  Components are numbered by
    their lexicographically smallest member ADU id, so the encoding is
    invariant under reordering of the input lists.

    Raises StanceTieError for a mixed-stance component with no
    majority stance.
    """
    adu_by_id = debate.adu_by_id
    uf = _UnionFind(adu_by_id)
    for rel in debate.relations:
        if rel.kind is not RelationKind.CONFLICT:
            uf.union(rel.source, rel.target)

    groups: dict[str, list[str]] = {}
    for adu_id in adu_by_id:
        groups.setdefault(uf.find(adu_id), []).append(adu_id)

    components = sorted(groups.values(), key=min)
    arguments = []
    component_of: dict[str, int] = {}
    for idx, members in enumerate(components):
        stances = Counter(adu_by_id[m].stance for m in members)
        arguments.append(
            AbstractArgument(
                id=idx,
                adu_ids=frozenset(members),
                stance=_majority_stance(debate.id, members, stances),
            )
        )
        for member in members:
            component_of[member] = idx

    attacks = frozenset(
        (component_of[rel.source], component_of[rel.target])
        for rel in debate.relations
        if rel.kind is RelationKind.CONFLICT
    )
    return ArgumentationFramework(
        debate_id=debate.id, arguments=tuple(arguments), attacks=attacks
    )


def af_summary(af: ArgumentationFramework) -> str:
    """Human-readable one-glance report on an AF."""
    favour = sum(1 for a in af.arguments if a.stance is Stance.FAVOUR)
    against = len(af.arguments) - favour
    return (
        f"|A|={len(af.arguments)} |R|={len(af.attacks)}\n"
        f"favour arguments: {favour}\n"
        f"against arguments: {against}\n"
        f"self-attacks: {len(af.self_attacks())}\n"
    )
