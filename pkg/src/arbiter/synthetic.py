"""Synthetic debate corpora with a tunable planted signal.

Debates mimic the shape of real tournament annotations: 10-40 ADUs per
debate, two stances, within-stance inference/rephrase chains forming
short lines of reasoning, and a handful of cross-stance conflicts.
Embeddings carry a stance-dependent base offset (so stance is
decodable from features, as it is for real sentence embeddings) plus a
shift along a fixed direction applied to the winning stance's ADUs and
scaled by `signal_strength`.  At signal 0 the features are fully
label-independent; at signal 1 the corpus is cleanly separable.
"""

from __future__ import annotations

import numpy as np

from .corpus import ADU, Debate, Phase, Relation, RelationKind, Stance
from .samples import EmbeddingTable

__all__ = ["generate_synthetic_corpus"]

_BASE_SCALE = 1.2
_SHIFT_SCALE = 1.5
_NOISE_SCALE = 0.5
_CHAIN_PROB = 0.55
_REPHRASE_PROB = 0.15


def _phase_for(index: int, total: int) -> Phase:
    if index < 2:
        return Phase.INTRODUCTION
    if index >= total - 2:
        return Phase.CONCLUSION
    return Phase.ARGUMENTATION


def generate_synthetic_corpus(
    n_debates: int,
    signal_strength: float,
    seed: int,
    *,
    dimension: int = 16,
) -> tuple[list[Debate], EmbeddingTable]:
    """Deterministically generate debates plus their embedding table."""
    if n_debates < 2:
        raise ValueError("n_debates must be >= 2")
    if not 0.0 <= signal_strength <= 1.0:
        raise ValueError("signal_strength must be in [0, 1]")
    if dimension < 3:
        raise ValueError("dimension must be >= 3 to fit the planted directions")

    rng = np.random.default_rng(seed)
    shift_dir = np.zeros(dimension)
    shift_dir[0] = 1.0
    base = {Stance.FAVOUR: np.zeros(dimension), Stance.AGAINST: np.zeros(dimension)}
    base[Stance.FAVOUR][1] = _BASE_SCALE
    base[Stance.AGAINST][2] = _BASE_SCALE

    debates: list[Debate] = []
    vectors: dict[str, np.ndarray] = {}
    for d in range(n_debates):
        debate_id = f"syn{d:03d}"
        n_adus = int(rng.integers(10, 41))
        stances = [
            Stance.FAVOUR if rng.random() < 0.5 else Stance.AGAINST
            for _ in range(n_adus)
        ]
        if len(set(stances)) == 1:  # keep both teams on the floor
            stances[-1] = (
                Stance.AGAINST if stances[0] is Stance.FAVOUR else Stance.FAVOUR
            )
        winner = Stance.FAVOUR if rng.random() < 0.5 else Stance.AGAINST

        adus = tuple(
            ADU(
                id=f"a{i:02d}",
                text=f"synthetic statement {i} taking the {stances[i].value} side",
                stance=stances[i],
                phase=_phase_for(i, n_adus),
                debate_id=debate_id,
            )
            for i in range(n_adus)
        )

        relations: list[Relation] = []
        earlier: dict[Stance, list[int]] = {Stance.FAVOUR: [], Stance.AGAINST: []}
        for i, stance in enumerate(stances):
            pool = earlier[stance]
            if pool and rng.random() < _CHAIN_PROB:
                j = int(pool[int(rng.integers(len(pool)))])
                kind = (
                    RelationKind.REPHRASE
                    if rng.random() < _REPHRASE_PROB
                    else RelationKind.INFERENCE
                )
                relations.append(
                    Relation(source=adus[i].id, target=adus[j].id, kind=kind)
                )
            pool.append(i)

        favour_ids = [a.id for a in adus if a.stance is Stance.FAVOUR]
        against_ids = [a.id for a in adus if a.stance is Stance.AGAINST]
        for _ in range(int(rng.integers(1, 8))):
            f = favour_ids[int(rng.integers(len(favour_ids)))]
            a = against_ids[int(rng.integers(len(against_ids)))]
            source, target = (f, a) if rng.random() < 0.5 else (a, f)
            relations.append(
                Relation(source=source, target=target, kind=RelationKind.CONFLICT)
            )

        debates.append(
            Debate(
                id=debate_id,
                adus=adus,
                relations=tuple(relations),
                winner=winner,
            )
        )
        for adu in adus:
            vec = base[adu.stance].copy()
            if adu.stance is winner:
                vec += signal_strength * _SHIFT_SCALE * shift_dir
            vec += rng.normal(0.0, _NOISE_SCALE, dimension)
            vectors[f"{debate_id}/{adu.id}"] = vec

    return debates, EmbeddingTable(dimension=dimension, vectors=vectors)
