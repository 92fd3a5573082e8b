"""Conflict-freeness, admissibility, and extension enumeration.

Naive extensions (maximal conflict-free sets) are enumerated as maximal
independent sets of the symmetrized attack graph via Bron-Kerbosch with
pivoting; self-attacking arguments can never be conflict-free and are
dropped before the search.  Preferred extensions (maximal admissible
sets) are obtained by shrinking each naive extension to its unique
largest admissible subset and keeping the inclusion-maximal survivors:
every admissible set is contained in some maximal conflict-free set,
and iteratively removing undefended members of a conflict-free set
converges to its maximum admissible subset, so the survivors are
exactly the maximal admissible sets.

`brute_force_extensions` re-derives both semantics by scanning every
subset and exists purely as an independent ground truth for tests.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .framework import ArgumentationFramework

__all__ = [
    "Semantics",
    "Extension",
    "EnumerationCapError",
    "is_conflict_free",
    "is_admissible",
    "naive_extensions",
    "preferred_extensions",
    "brute_force_extensions",
    "DEFAULT_MAX_EXTENSIONS",
    "DEFAULT_TIME_LIMIT",
]

DEFAULT_MAX_EXTENSIONS = 100_000
DEFAULT_TIME_LIMIT = 60.0
_BRUTE_FORCE_CAP = 20


class Semantics(Enum):
    NAIVE = "naive"
    PREFERRED = "preferred"


class EnumerationCapError(RuntimeError):
    """Extension enumeration exceeded its extension count or time budget."""

    def __init__(self, debate_id: str, reason: str):
        super().__init__(f"enumeration aborted for {debate_id!r}: {reason}")
        self.debate_id = debate_id
        self.reason = reason


@dataclass(frozen=True)
class Extension:
    """One acceptable set of arguments under a named semantics."""

    argument_ids: frozenset[int]
    semantics: Semantics
    debate_id: str


def _check_members(af: ArgumentationFramework, s: Iterable[int]) -> frozenset[int]:
    members = frozenset(s)
    unknown = members - af.argument_ids
    if unknown:
        raise ValueError(f"unknown argument id {min(unknown)!r}")
    return members


def is_conflict_free(af: ArgumentationFramework, s: Iterable[int]) -> bool:
    """True iff no member of `s` attacks a member of `s` (self included)."""
    members = _check_members(af, s)
    return not any(
        (x, y) in af.attacks for x in members for y in members
    )


def is_admissible(af: ArgumentationFramework, s: Iterable[int]) -> bool:
    """True iff `s` is conflict-free and counter-attacks all its attackers."""
    members = _check_members(af, s)
    if not is_conflict_free(af, members):
        return False
    attackers = af.attackers_of()
    for member in members:
        for attacker in attackers[member]:
            if not (attackers[attacker] & members):
                return False
    return True


class _Budget:
    """Shared cap on produced extensions and wall-clock time."""

    def __init__(self, debate_id: str, max_extensions: int, time_limit: float):
        self.debate_id = debate_id
        self.max_extensions = max_extensions
        self.deadline = time.monotonic() + time_limit
        self.produced = 0
        self._ticks = 0

    def tick(self) -> None:
        self._ticks += 1
        if self._ticks % 256 == 0 and time.monotonic() > self.deadline:
            raise EnumerationCapError(self.debate_id, "time limit exceeded")

    def count(self) -> None:
        self.produced += 1
        if self.produced > self.max_extensions:
            raise EnumerationCapError(
                self.debate_id,
                f"more than {self.max_extensions} extensions",
            )


def _maximal_independent_sets(
    vertices: frozenset[int],
    neighbours: dict[int, frozenset[int]],
    budget: _Budget,
) -> list[frozenset[int]]:
    """All maximal independent sets of an undirected graph.

    Bron-Kerbosch with pivoting run on the complement graph; complement
    adjacency is materialized once, which is fine at the argument
    counts debates produce.
    """
    if not vertices:
        budget.count()
        return [frozenset()]
    co = {v: vertices - neighbours[v] - {v} for v in vertices}
    if len(vertices) + 64 > sys.getrecursionlimit():
        sys.setrecursionlimit(len(vertices) + 1024)
    results: list[frozenset[int]] = []

    def expand(included: set[int], candidates: set[int], excluded: set[int]) -> None:
        budget.tick()
        if not candidates and not excluded:
            budget.count()
            results.append(frozenset(included))
            return
        pivot = max(candidates | excluded, key=lambda v: len(co[v] & candidates))
        for v in list(candidates - co[pivot]):
            included.add(v)
            expand(included, candidates & co[v], excluded & co[v])
            included.remove(v)
            candidates.remove(v)
            excluded.add(v)

    expand(set(), set(vertices), set())
    return results


def _canonical(
    sets: Iterable[frozenset[int]], semantics: Semantics, debate_id: str
) -> list[Extension]:
    ordered = sorted(sets, key=lambda s: sorted(s))
    return [
        Extension(argument_ids=s, semantics=semantics, debate_id=debate_id)
        for s in ordered
    ]


def naive_extensions(
    af: ArgumentationFramework,
    *,
    max_extensions: int = DEFAULT_MAX_EXTENSIONS,
    time_limit: float = DEFAULT_TIME_LIMIT,
) -> list[Extension]:
    """All maximal conflict-free sets, in canonical order.

    Raises EnumerationCapError when the extension count or time budget
    is exhausted.
    """
    budget = _Budget(af.debate_id, max_extensions, time_limit)
    vertices = frozenset(af.argument_ids - af.self_attacks())
    # symmetrized attack adjacency restricted to non-self-attackers
    attackers = af.attackers_of()
    targets = af.targets_of()
    neighbours = {
        v: frozenset((attackers[v] | targets[v]) & vertices) for v in vertices
    }
    sets = _maximal_independent_sets(vertices, neighbours, budget)
    return _canonical(sets, Semantics.NAIVE, af.debate_id)


def _max_admissible_subset(
    members: frozenset[int],
    attackers: dict[int, set[int]],
) -> frozenset[int]:
    """Largest admissible subset of a conflict-free set.

    Repeatedly removes members with an attacker the remaining set does
    not counter-attack; any admissible subset survives every round, so
    the fixpoint is the unique maximum.
    """
    current = set(members)
    while True:
        undefended = {
            m
            for m in current
            if any(not (attackers[k] & current) for k in attackers[m])
        }
        if not undefended:
            return frozenset(current)
        current -= undefended


def preferred_extensions(
    af: ArgumentationFramework,
    *,
    max_extensions: int = DEFAULT_MAX_EXTENSIONS,
    time_limit: float = DEFAULT_TIME_LIMIT,
) -> list[Extension]:
    """All maximal admissible sets, in canonical order."""
    naive = naive_extensions(
        af, max_extensions=max_extensions, time_limit=time_limit
    )
    attackers = af.attackers_of()
    candidates = {
        _max_admissible_subset(ext.argument_ids, attackers) for ext in naive
    }
    maximal = [
        s
        for s in candidates
        if not any(s < other for other in candidates)
    ]
    return _canonical(maximal, Semantics.PREFERRED, af.debate_id)


def brute_force_extensions(
    af: ArgumentationFramework, semantics: Semantics
) -> list[Extension]:
    """Ground-truth enumeration by scanning all 2^n subsets (n <= 20).

    Filters subsets by the defining property of the chosen semantics
    and keeps the inclusion-maximal ones.  Deliberately shares no code
    with the optimized enumerators.
    """
    n = len(af.arguments)
    if n > _BRUTE_FORCE_CAP:
        raise EnumerationCapError(
            af.debate_id, f"brute force capped at {_BRUTE_FORCE_CAP} arguments"
        )
    ids = sorted(af.argument_ids)
    pos = {arg_id: i for i, arg_id in enumerate(ids)}
    attacker_mask = [0] * n
    for s, t in af.attacks:
        attacker_mask[pos[t]] |= 1 << pos[s]

    def bits(mask: int) -> list[int]:
        return [i for i in range(n) if mask >> i & 1]

    def conflict_free(mask: int) -> bool:
        return all(attacker_mask[i] & mask == 0 for i in bits(mask))

    def admissible(mask: int) -> bool:
        if not conflict_free(mask):
            return False
        for i in bits(mask):
            for k in bits(attacker_mask[i]):
                if attacker_mask[k] & mask == 0:
                    return False
        return True

    if semantics is Semantics.NAIVE:
        accepted = [m for m in range(1 << n) if conflict_free(m)]
        # conflict-freeness is closed under subsets, so maximality can be
        # decided by single-argument additions
        maximal = [
            m
            for m in accepted
            if all(
                m >> x & 1 or not conflict_free(m | 1 << x) for x in range(n)
            )
        ]
    else:
        accepted = [m for m in range(1 << n) if admissible(m)]
        maximal = []
        for m in sorted(accepted, key=int.bit_count, reverse=True):
            if not any(m != kept and m & kept == m for kept in maximal):
                maximal.append(m)

    sets = [frozenset(ids[i] for i in bits(m)) for m in maximal]
    return _canonical(sets, semantics, af.debate_id)
