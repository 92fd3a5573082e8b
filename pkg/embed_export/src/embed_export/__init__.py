"""Sentence-embedding exporter for annotated debate corpora.

Runs a frozen pretrained multilingual sentence encoder over every ADU
of a corpus of canonical debate JSON files and writes the text
embedding file consumed by the evaluation pipeline.  The two packages
share nothing but the file formats.
"""

__version__ = "0.1.0"

from .exporter import (
    EncoderLoadError,
    ExportError,
    ExportManifest,
    HashEncoder,
    export_embeddings,
    load_encoder,
)
