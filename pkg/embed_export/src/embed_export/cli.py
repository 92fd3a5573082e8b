"""The export-embeddings command."""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .exporter import EncoderLoadError, ExportError, export_embeddings


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="export-embeddings",
        description="Embed every ADU of a debate corpus with a frozen "
        "pretrained sentence encoder and write the embedding file.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "--corpus", required=True, help="directory of canonical debate JSON"
    )
    parser.add_argument(
        "--model",
        required=True,
        help="sentence-transformers model id, or hash:<dim> for the "
        "deterministic offline encoder",
    )
    parser.add_argument("--out", required=True, help="output embedding file")
    parser.add_argument("--batch-size", type=int, default=32)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        manifest = export_embeddings(
            args.corpus, args.model, args.out, batch_size=args.batch_size
        )
    except (ExportError, EncoderLoadError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(manifest.to_text(), end="")
    return 0


if __name__ == "__main__":
    sys.exit(main())
