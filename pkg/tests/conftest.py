"""Shared builders for frameworks, debates, and random instances."""

from __future__ import annotations

import random

import numpy as np
import pytest

from arbiter.corpus import ADU, Debate, Phase, Relation, RelationKind, Stance
from arbiter.framework import AbstractArgument, ArgumentationFramework


def make_af(
    n: int,
    attacks: set[tuple[int, int]] | list[tuple[int, int]] = (),
    *,
    stances: list[Stance] | None = None,
    debate_id: str = "test",
) -> ArgumentationFramework:
    """AF with n singleton arguments named a0..a(n-1)."""
    if stances is None:
        stances = [
            Stance.FAVOUR if i % 2 == 0 else Stance.AGAINST for i in range(n)
        ]
    return ArgumentationFramework(
        debate_id=debate_id,
        arguments=tuple(
            AbstractArgument(id=i, adu_ids=frozenset({f"a{i}"}), stance=stances[i])
            for i in range(n)
        ),
        attacks=frozenset(attacks),
    )


def random_af(rng: random.Random, n: int, density: float) -> ArgumentationFramework:
    attacks = {
        (i, j)
        for i in range(n)
        for j in range(n)
        if rng.random() < density
    }
    return make_af(n, attacks)


def make_debate(
    adu_specs: list[tuple[str, Stance]],
    relations: list[tuple[str, str, RelationKind]] = (),
    *,
    debate_id: str = "d",
    winner: Stance = Stance.FAVOUR,
) -> Debate:
    return Debate(
        id=debate_id,
        adus=tuple(
            ADU(
                id=adu_id,
                text=f"text of {adu_id}",
                stance=stance,
                phase=Phase.ARGUMENTATION,
                debate_id=debate_id,
            )
            for adu_id, stance in adu_specs
        ),
        relations=tuple(
            Relation(source=s, target=t, kind=k) for s, t, k in relations
        ),
        winner=winner,
    )


def random_debate(rng: random.Random, *, debate_id: str = "rnd") -> Debate:
    """Random debate with inference/rephrase forests and a few conflicts."""
    n = rng.randint(2, 14)
    stances = [rng.choice((Stance.FAVOUR, Stance.AGAINST)) for _ in range(n)]
    adu_specs = [(f"u{i:02d}", stances[i]) for i in range(n)]
    relations: list[tuple[str, str, RelationKind]] = []
    for i in range(1, n):
        if rng.random() < 0.5:
            j = rng.randrange(i)
            kind = rng.choice((RelationKind.INFERENCE, RelationKind.REPHRASE))
            if rng.random() < 0.5:
                relations.append((adu_specs[i][0], adu_specs[j][0], kind))
            else:
                relations.append((adu_specs[j][0], adu_specs[i][0], kind))
    for _ in range(rng.randint(0, 5)):
        i, j = rng.randrange(n), rng.randrange(n)
        if i != j:
            relations.append(
                (adu_specs[i][0], adu_specs[j][0], RelationKind.CONFLICT)
            )
    winner = rng.choice((Stance.FAVOUR, Stance.AGAINST))
    return make_debate(
        adu_specs, relations, debate_id=debate_id, winner=winner
    )


@pytest.fixture
def tiny_table():
    """Constant embedding table factory for hand-checkable features."""

    def build(debate: Debate, vectors: dict[str, np.ndarray], dimension: int):
        from arbiter.samples import EmbeddingTable

        return EmbeddingTable(
            dimension=dimension,
            vectors={
                f"{debate.id}/{adu_id}": np.asarray(vec, dtype=float)
                for adu_id, vec in vectors.items()
            },
        )

    return build
