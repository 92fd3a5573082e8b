"""Batched embedding export with a deterministic on-disk format.

Output format (UTF-8 text): a ``DIM <d>`` header line, then one row
per ADU, ``<debate_id>/<adu_id>\\t<f1> <f2> ... <fd>`` with decimal
floats at 9 significant digits.  Rows follow debate filename order and
in-file ADU order, and the file is written in a single pass, so a
repeated export over the same corpus and model revision is
byte-identical.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol, Sequence

import numpy as np

__all__ = [
    "EncoderLoadError",
    "ExportError",
    "ExportManifest",
    "SentenceEncoder",
    "HashEncoder",
    "TransformerEncoder",
    "load_encoder",
    "export_embeddings",
]

CACHE_ENV = "EMBED_EXPORT_CACHE"
DEFAULT_BATCH_SIZE = 32


class ExportError(ValueError):
    """The corpus cannot be exported (bad file, empty ADU text, ...)."""


class EncoderLoadError(RuntimeError):
    """The requested sentence encoder could not be loaded."""


class SentenceEncoder(Protocol):
    """Minimal encoder surface: a fixed dimension and batch encoding."""

    model_id: str
    dimension: int

    def encode(self, texts: Sequence[str]) -> np.ndarray: ...


class HashEncoder:
    """Deterministic stand-in encoder for tests and offline dry runs.

    Produces the same keyed-hash unit vectors on every platform;
    selected with model ids of the form ``hash:<dimension>``.
    """

    def __init__(self, dimension: int = 768, seed: int = 0):
        if dimension < 1:
            raise EncoderLoadError("hash encoder dimension must be >= 1")
        self.model_id = f"hash:{dimension}"
        self.dimension = dimension
        self.seed = seed

    def encode(self, texts: Sequence[str]) -> np.ndarray:
        rows = np.zeros((len(texts), self.dimension))
        for i, text in enumerate(texts):
            digest = hashlib.sha256(
                self.seed.to_bytes(8, "little", signed=True)
                + text.encode("utf-8")
            ).digest()
            rng = np.random.Generator(
                np.random.PCG64(int.from_bytes(digest[:16], "little"))
            )
            vec = rng.standard_normal(self.dimension)
            rows[i] = vec / np.linalg.norm(vec)
        return rows


class TransformerEncoder:
    """Frozen pretrained multilingual sentence encoder.

    Texts are embedded as-is; the model revision is whatever the local
    cache (``EMBED_EXPORT_CACHE``) or hub resolution pins.
    """

    def __init__(self, model_id: str):
        try:
            from sentence_transformers import SentenceTransformer
        except ImportError as exc:  # pragma: no cover - environment issue
            raise EncoderLoadError(
                "sentence-transformers is not installed"
            ) from exc
        cache = os.environ.get(CACHE_ENV)
        try:
            self._model = SentenceTransformer(model_id, cache_folder=cache)
        except Exception as exc:
            raise EncoderLoadError(
                f"cannot load sentence encoder {model_id!r}: {exc}"
            ) from exc
        self.model_id = model_id
        dimension = self._model.get_sentence_embedding_dimension()
        if not dimension:
            raise EncoderLoadError(
                f"encoder {model_id!r} does not report an output dimension"
            )
        self.dimension = int(dimension)

    def encode(self, texts: Sequence[str]) -> np.ndarray:
        return np.asarray(
            self._model.encode(
                list(texts),
                batch_size=DEFAULT_BATCH_SIZE,
                convert_to_numpy=True,
                normalize_embeddings=False,
                show_progress_bar=False,
            ),
            dtype=np.float64,
        )


def load_encoder(model_id: str) -> SentenceEncoder:
    """Resolve a model id: ``hash:<d>`` gives the test encoder, anything
    else is loaded as a pretrained sentence-transformers model."""
    if model_id.startswith("hash:"):
        suffix = model_id.split(":", 1)[1]
        if not suffix.isdigit():
            raise EncoderLoadError(f"bad hash encoder id {model_id!r}")
        return HashEncoder(int(suffix))
    return TransformerEncoder(model_id)


@dataclass(frozen=True)
class ExportManifest:
    """What was embedded, with what, and where it went."""

    model_id: str
    dimension: int
    corpus_dir: str
    out_path: str
    n_debates: int
    n_adus: int

    def to_text(self) -> str:
        return (
            f"model: {self.model_id}\n"
            f"dimension: {self.dimension}\n"
            f"corpus: {self.corpus_dir}\n"
            f"output: {self.out_path}\n"
            f"debates: {self.n_debates}\n"
            f"adus embedded: {self.n_adus}\n"
        )


def _read_corpus_texts(corpus_dir: str | Path) -> list[tuple[str, str]]:
    """(row key, text) pairs in deterministic order.

    Reads the canonical debate JSON layout directly; the full semantic
    validation lives upstream, but empty texts are re-checked here
    because the encoder would silently embed them.
    """
    corpus_dir = Path(corpus_dir)
    if not corpus_dir.is_dir():
        raise ExportError(f"corpus directory {corpus_dir} does not exist")
    pairs: list[tuple[str, str]] = []
    seen: set[str] = set()
    paths = sorted(corpus_dir.glob("*.json"))
    if not paths:
        raise ExportError(f"no debate files under {corpus_dir}")
    for path in paths:
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ExportError(f"{path}: not valid JSON: {exc}") from exc
        debate_id = data.get("id")
        if not isinstance(debate_id, str):
            raise ExportError(f"{path}: missing debate id")
        for adu in data.get("adus", []):
            key = f"{debate_id}/{adu.get('id')}"
            text = adu.get("text", "")
            if not isinstance(text, str) or not text.strip():
                raise ExportError(f"{path}: ADU {key!r} has empty text")
            if key in seen:
                raise ExportError(f"{path}: duplicate ADU key {key!r}")
            seen.add(key)
            pairs.append((key, text))
    return pairs


def export_embeddings(
    corpus_dir: str | Path,
    model_id: str,
    out_path: str | Path,
    *,
    encoder: SentenceEncoder | None = None,
    batch_size: int = DEFAULT_BATCH_SIZE,
) -> ExportManifest:
    """Embed every ADU of a corpus and write the embedding file.

    An explicit `encoder` bypasses model resolution (used by tests).
    """
    if encoder is None:
        encoder = load_encoder(model_id)
    pairs = _read_corpus_texts(corpus_dir)
    out_path = Path(out_path)

    with out_path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"DIM {encoder.dimension}\n")
        for start in range(0, len(pairs), batch_size):
            batch = pairs[start : start + batch_size]
            matrix = encoder.encode([text for _, text in batch])
            if matrix.shape != (len(batch), encoder.dimension):
                raise ExportError(
                    f"encoder returned shape {matrix.shape}, expected "
                    f"({len(batch)}, {encoder.dimension})"
                )
            if not np.all(np.isfinite(matrix)):
                raise ExportError("encoder produced non-finite values")
            for (key, _), row in zip(batch, matrix):
                rendered = " ".join(f"{value:.9g}" for value in row)
                fh.write(f"{key}\t{rendered}\n")

    debate_ids = {key.split("/", 1)[0] for key, _ in pairs}
    return ExportManifest(
        model_id=encoder.model_id,
        dimension=encoder.dimension,
        corpus_dir=str(corpus_dir),
        out_path=str(out_path),
        n_debates=len(debate_ids),
        n_adus=len(pairs),
    )
