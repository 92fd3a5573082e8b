"""Learning-sample construction from extensions.

Each extension becomes a complete bipartite graph: the two blocks are
the favour and against arguments, with directed edges both ways across
every cross-stance pair.  Node features are the mean of the member ADU
sentence embeddings, edge features are a shared constant vector, the
global feature starts at zero, and the winner label rides separately
as the training target.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .corpus import Debate, Stance
from .framework import ArgumentationFramework
from .semantics import Extension

__all__ = [
    "EmbeddingTable",
    "EmbeddingFormatError",
    "MissingEmbeddingError",
    "BipartiteGraph",
    "LearningSample",
    "hash_embed",
    "hash_embedding_table",
    "load_embeddings",
    "save_embeddings",
    "build_bipartite",
    "init_features",
    "samples_to_json",
    "samples_from_json",
    "DEFAULT_EDGE_DIM",
    "GLOBAL_DIM",
]

logger = logging.getLogger(__name__)

DEFAULT_EDGE_DIM = 8
GLOBAL_DIM = 2


class EmbeddingFormatError(ValueError):
    """An embedding file does not satisfy the declared format."""


class MissingEmbeddingError(KeyError):
    """A referenced ADU has no embedding vector."""


@dataclass(frozen=True)
class EmbeddingTable:
    """Immutable ADU-id -> vector map with a fixed dimension.

    Keys are ``<debate_id>/<adu_id>`` so one table can span a corpus.
    """

    dimension: int
    vectors: Mapping[str, np.ndarray]

    def lookup(self, debate_id: str, adu_id: str) -> np.ndarray:
        key = f"{debate_id}/{adu_id}"
        try:
            return self.vectors[key]
        except KeyError:
            raise MissingEmbeddingError(key) from None

    def __len__(self) -> int:
        return len(self.vectors)


def hash_embed(text: str, dimension: int, seed: int) -> np.ndarray:
    """Deterministic pseudo-random unit vector for a text.

    Seeds a PCG64 stream from a SHA-256 of (seed, text), so identical
    texts map to identical vectors on every platform.  Used as a
    drop-in replacement for a sentence encoder in tests and dry runs.
    """
    if dimension < 1:
        raise ValueError("dimension must be >= 1")
    digest = hashlib.sha256(
        seed.to_bytes(8, "little", signed=True) + text.encode("utf-8")
    ).digest()
    rng = np.random.Generator(
        np.random.PCG64(int.from_bytes(digest[:16], "little"))
    )
    vec = rng.standard_normal(dimension)
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:  # unreachable for continuous draws; keep the contract
        vec[0] = 1.0
        norm = 1.0
    return vec / norm


def hash_embedding_table(
    debates: Iterable[Debate], dimension: int, seed: int = 0
) -> EmbeddingTable:
    """Hash-embed every ADU of the given debates."""
    vectors = {
        f"{debate.id}/{adu.id}": hash_embed(adu.text, dimension, seed)
        for debate in debates
        for adu in debate.adus
    }
    return EmbeddingTable(dimension=dimension, vectors=vectors)


def load_embeddings(path: str | Path) -> EmbeddingTable:
    """Read the text embedding format: ``DIM <d>`` header, then one
    ``<debate_id>/<adu_id>\\t<f1> <f2> ...`` row per ADU."""
    path = Path(path)
    vectors: dict[str, np.ndarray] = {}
    with path.open("r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        parts = header.split()
        if len(parts) != 2 or parts[0] != "DIM" or not parts[1].isdigit():
            raise EmbeddingFormatError(
                f"{path}: expected 'DIM <d>' header, got {header!r}"
            )
        dimension = int(parts[1])
        if dimension < 1:
            raise EmbeddingFormatError(f"{path}: dimension must be >= 1")
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            try:
                key, payload = line.split("\t", 1)
            except ValueError:
                raise EmbeddingFormatError(
                    f"{path}:{lineno}: missing tab separator"
                ) from None
            fields = payload.split()
            if len(fields) != dimension:
                raise EmbeddingFormatError(
                    f"{path}:{lineno}: expected {dimension} values, "
                    f"got {len(fields)}"
                )
            try:
                vec = np.array([float(f) for f in fields], dtype=np.float64)
            except ValueError as exc:
                raise EmbeddingFormatError(f"{path}:{lineno}: {exc}") from None
            if not np.all(np.isfinite(vec)):
                raise EmbeddingFormatError(
                    f"{path}:{lineno}: non-finite value in row {key!r}"
                )
            if key in vectors:
                raise EmbeddingFormatError(f"{path}:{lineno}: duplicate row {key!r}")
            vectors[key] = vec
    return EmbeddingTable(dimension=dimension, vectors=vectors)


def save_embeddings(table: EmbeddingTable, path: str | Path) -> None:
    """Write a table in the text embedding format (rows sorted by key)."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        fh.write(f"DIM {table.dimension}\n")
        for key in sorted(table.vectors):
            row = " ".join(repr(float(v)) for v in table.vectors[key])
            fh.write(f"{key}\t{row}\n")


@dataclass(frozen=True)
class BipartiteGraph:
    """Unfeatured complete bipartite graph over one extension.

    Nodes are the extension's arguments ordered by id; `edges` holds
    (sender index, receiver index) pairs into that order, both
    directions per cross-stance pair.
    """

    debate_id: str
    semantics: str
    node_ids: tuple[int, ...]
    node_stances: tuple[Stance, ...]
    node_adu_ids: tuple[frozenset[str], ...]
    edges: tuple[tuple[int, int], ...]


def build_bipartite(ext: Extension, af: ArgumentationFramework) -> BipartiteGraph:
    """Complete bipartite graph over an extension, partitioned by stance.

    Empty partitions (or an empty extension) are allowed and simply
    produce a graph with no edges (or no nodes).
    """
    unknown = ext.argument_ids - af.argument_ids
    if unknown:
        raise ValueError(f"extension references unknown argument {min(unknown)!r}")
    node_ids = tuple(sorted(ext.argument_ids))
    stances = tuple(af.argument(i).stance for i in node_ids)
    adu_ids = tuple(af.argument(i).adu_ids for i in node_ids)
    edges: list[tuple[int, int]] = []
    for i in range(len(node_ids)):
        for j in range(i + 1, len(node_ids)):
            if stances[i] is not stances[j]:
                edges.append((i, j))
                edges.append((j, i))
    return BipartiteGraph(
        debate_id=ext.debate_id,
        semantics=ext.semantics.value,
        node_ids=node_ids,
        node_stances=stances,
        node_adu_ids=adu_ids,
        edges=tuple(edges),
    )


@dataclass(frozen=True)
class LearningSample:
    """Featured bipartite graph plus its binary winner label.

    `senders`/`receivers` index into the node arrays.  The global
    feature is an input to the network; the label (0 favour wins,
    1 against wins) is the training target.
    """

    debate_id: str
    semantics: str
    node_ids: tuple[int, ...]
    node_stances: tuple[Stance, ...]
    node_features: np.ndarray  # (n_nodes, node_dim)
    senders: np.ndarray  # (n_edges,) int
    receivers: np.ndarray  # (n_edges,) int
    edge_features: np.ndarray  # (n_edges, edge_dim)
    global_features: np.ndarray  # (GLOBAL_DIM,)
    label: int

    @property
    def n_nodes(self) -> int:
        return self.node_features.shape[0]

    @property
    def n_edges(self) -> int:
        return self.edge_features.shape[0]


def init_features(
    graph: BipartiteGraph,
    debate: Debate,
    table: EmbeddingTable,
    *,
    edge_dim: int = DEFAULT_EDGE_DIM,
) -> LearningSample:
    """Attach features to a bipartite graph.

    Node features are the arithmetic mean of the member ADU embeddings;
    edge features are the shared all-ones constant of `edge_dim`
    entries; the global input is the zero vector.
    """
    if graph.debate_id != debate.id:
        raise ValueError(
            f"graph belongs to debate {graph.debate_id!r}, not {debate.id!r}"
        )
    node_features = np.zeros((len(graph.node_ids), table.dimension))
    for row, adu_ids in enumerate(graph.node_adu_ids):
        member_vecs = [table.lookup(debate.id, adu_id) for adu_id in sorted(adu_ids)]
        stacked = np.stack(member_vecs)
        if stacked.shape[1] != table.dimension:
            raise EmbeddingFormatError(
                f"embedding dimension {stacked.shape[1]} does not match "
                f"table dimension {table.dimension}"
            )
        node_features[row] = stacked.mean(axis=0)
    n_edges = len(graph.edges)
    senders = np.array([s for s, _ in graph.edges], dtype=np.intp)
    receivers = np.array([r for _, r in graph.edges], dtype=np.intp)
    return LearningSample(
        debate_id=graph.debate_id,
        semantics=graph.semantics,
        node_ids=graph.node_ids,
        node_stances=graph.node_stances,
        node_features=node_features,
        senders=senders,
        receivers=receivers,
        edge_features=np.ones((n_edges, edge_dim)),
        global_features=np.zeros(GLOBAL_DIM),
        label=debate.winner.class_index,
    )


def samples_to_json(samples: Sequence[LearningSample]) -> str:
    """Serialize samples for the on-disk samples.json interchange file."""
    payload = {
        "format_version": 1,
        "samples": [
            {
                "debate_id": s.debate_id,
                "semantics": s.semantics,
                "label": s.label,
                "node_dim": s.node_features.shape[1],
                "edge_dim": s.edge_features.shape[1],
                "node_ids": list(s.node_ids),
                "node_stances": [st.value for st in s.node_stances],
                "node_features": s.node_features.tolist(),
                "senders": s.senders.tolist(),
                "receivers": s.receivers.tolist(),
                "edge_features": s.edge_features.tolist(),
                "global_features": s.global_features.tolist(),
            }
            for s in samples
        ],
    }
    return json.dumps(payload)


def samples_from_json(text: str) -> list[LearningSample]:
    data = json.loads(text)
    if data.get("format_version") != 1:
        raise ValueError("unsupported samples file version")
    samples = []
    for entry in data["samples"]:
        n_nodes = len(entry["node_ids"])
        n_edges = len(entry["senders"])
        node_features = np.array(entry["node_features"], dtype=np.float64)
        edge_features = np.array(entry["edge_features"], dtype=np.float64)
        if n_nodes == 0:
            node_features = node_features.reshape(0, entry["node_dim"])
        if n_edges == 0:
            edge_features = edge_features.reshape(0, entry["edge_dim"])
        if not math.isfinite(node_features.sum() + edge_features.sum()):
            raise ValueError("non-finite feature in samples file")
        samples.append(
            LearningSample(
                debate_id=entry["debate_id"],
                semantics=entry["semantics"],
                node_ids=tuple(entry["node_ids"]),
                node_stances=tuple(Stance(v) for v in entry["node_stances"]),
                node_features=node_features,
                senders=np.array(entry["senders"], dtype=np.intp),
                receivers=np.array(entry["receivers"], dtype=np.intp),
                edge_features=edge_features,
                global_features=np.array(entry["global_features"], dtype=np.float64),
                label=int(entry["label"]),
            )
        )
    return samples
