"""Command-line front end.

Exit codes: 0 success, 2 validation/parse failure, 3 enumeration
resource cap exceeded, 1 anything else.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .apx import export_apx, load_apx
from .convert import ConversionError, convert_tabular_debate
from .corpus import (
    DebateParseError,
    DebateValidationError,
    corpus_stats,
    load_corpus,
    load_debate,
    save_debate,
)
from .framework import StanceTieError, af_summary, encode_af
from .network import (
    NonFiniteActivationError,
    TrainConfig,
    TrainingDivergedError,
    load_checkpoint,
    predict_debate,
    save_checkpoint,
)
from .pipeline import (
    ExperimentConfig,
    PipelineStageError,
    build_corpus_samples,
    run_experiment,
)
from .samples import (
    hash_embedding_table,
    load_embeddings,
    samples_from_json,
    samples_to_json,
)
from .semantics import (
    EnumerationCapError,
    Semantics,
    brute_force_extensions,
    naive_extensions,
    preferred_extensions,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VALIDATION = 2
EXIT_RESOURCE_CAP = 3

_VALIDATION_ERRORS = (
    DebateParseError,
    DebateValidationError,
    StanceTieError,
    ConversionError,
    ValueError,
)


def _cmd_validate(args) -> int:
    status = EXIT_OK
    for path in args.paths:
        try:
            debate = load_debate(path)
        except (DebateParseError, DebateValidationError) as exc:
            print(f"{path}: INVALID: {exc}")
            status = EXIT_VALIDATION
        else:
            print(f"{path}: ok ({len(debate.adus)} adus, "
                  f"{len(debate.relations)} relations)")
    return status


def _cmd_stats(args) -> int:
    debates = load_corpus(args.directory)
    print(corpus_stats(debates).to_text(), end="")
    return EXIT_OK


def _cmd_encode(args) -> int:
    debate = load_debate(args.debate)
    af = encode_af(debate)
    if args.apx:
        Path(args.apx).write_text(export_apx(af), encoding="utf-8")
        print(f"wrote {args.apx}")
    if args.summary or not args.apx:
        print(af_summary(af), end="")
    return EXIT_OK


def _load_framework(path: str):
    if path.endswith(".apx"):
        return load_apx(path)
    return encode_af(load_debate(path))


def _cmd_solve(args) -> int:
    af = _load_framework(args.input)
    semantics = Semantics(args.semantics)
    if args.oracle:
        extensions = brute_force_extensions(af, semantics)
    elif semantics is Semantics.NAIVE:
        extensions = naive_extensions(af)
    else:
        extensions = preferred_extensions(af)
    print(json.dumps([sorted(e.argument_ids) for e in extensions]))
    return EXIT_OK


def _cmd_convert(args) -> int:
    result = convert_tabular_debate(
        args.input, debate_id=args.id, winner=args.winner
    )
    save_debate(result.debate, args.out)
    for warning in result.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    print(f"wrote {args.out} ({len(result.debate.adus)} adus, "
          f"{len(result.debate.relations)} relations, "
          f"{len(result.warnings)} warning(s))")
    return EXIT_OK


def _cmd_build_samples(args) -> int:
    debates = load_corpus(args.corpus)
    if args.embeddings:
        table = load_embeddings(args.embeddings)
    else:
        table = hash_embedding_table(debates, args.hash_dim, args.hash_seed)
    samples = build_corpus_samples(
        debates, table, Semantics(args.semantics), edge_dim=args.edge_dim
    )
    Path(args.out).write_text(samples_to_json(samples), encoding="utf-8")
    print(f"wrote {args.out} ({len(samples)} samples)")
    return EXIT_OK


def _train_config_from_toml(path: str | None) -> TrainConfig:
    if path is None:
        return TrainConfig()
    import tomli

    with open(path, "rb") as fh:
        return TrainConfig(**tomli.load(fh))


def _cmd_train(args) -> int:
    from .network import init_parameters, train

    samples = samples_from_json(Path(args.samples).read_text(encoding="utf-8"))
    if not samples:
        raise ValueError("samples file contains no samples")
    cfg = _train_config_from_toml(args.config)
    non_empty = [s for s in samples if s.n_nodes]
    if not non_empty:
        raise ValueError("samples file contains only empty graphs")
    node_dim = non_empty[0].node_features.shape[1]
    edge_dim = max(
        (s.edge_features.shape[1] for s in non_empty if s.n_edges),
        default=non_empty[0].edge_features.shape[1],
    )
    params = init_parameters(node_dim, edge_dim, seed=cfg.seed)
    trained, history = train(params, non_empty, cfg)
    save_checkpoint(trained, args.out)
    print(f"wrote {args.out} (final epoch loss {history[-1]:.6f})")
    return EXIT_OK


def _cmd_predict(args) -> int:
    params = load_checkpoint(args.model)
    samples = samples_from_json(Path(args.samples).read_text(encoding="utf-8"))
    by_debate: dict[str, list] = {}
    for sample in samples:
        if sample.n_nodes:
            by_debate.setdefault(sample.debate_id, []).append(sample)
    results = {}
    for debate_id in sorted(by_debate):
        outcome = predict_debate(params, by_debate[debate_id])
        results[debate_id] = {
            "winner": "F" if outcome.label == 0 else "A",
            "confidence": outcome.confidence,
        }
    print(json.dumps(results, indent=2))
    return EXIT_OK


def _cmd_run(args) -> int:
    cfg = ExperimentConfig.from_toml(args.config)
    report = run_experiment(cfg)
    if args.json_out:
        Path(args.json_out).write_text(report.to_json(), encoding="utf-8")
    print(report.to_text(), end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arbiter",
        description="Debate winner prediction from argumentation-framework "
        "extensions and a graph network.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate debate JSON files")
    p.add_argument("paths", nargs="+")
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("stats", help="corpus statistics")
    p.add_argument("directory")
    p.set_defaults(fn=_cmd_stats)

    p = sub.add_parser("encode", help="encode a debate as an AF")
    p.add_argument("debate")
    p.add_argument("--apx", help="write APX to this path")
    p.add_argument("--summary", action="store_true")
    p.set_defaults(fn=_cmd_encode)

    p = sub.add_parser("solve", help="enumerate extensions")
    p.add_argument("input", help="debate .json or framework .apx")
    p.add_argument(
        "--semantics", choices=["naive", "preferred"], required=True
    )
    p.add_argument(
        "--oracle", action="store_true",
        help="use the brute-force oracle (n <= 20)",
    )
    p.set_defaults(fn=_cmd_solve)

    p = sub.add_parser("convert", help="convert a tabular annotation file")
    p.add_argument("input")
    p.add_argument("--winner", required=True, choices=["F", "A"])
    p.add_argument("--id", help="debate id (default: file stem)")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_convert)

    p = sub.add_parser("build-samples", help="build learning samples")
    p.add_argument("corpus", help="directory of debate JSON files")
    p.add_argument(
        "--semantics", choices=["naive", "preferred"], required=True
    )
    p.add_argument("--embeddings", help="embedding file (default: hash embed)")
    p.add_argument("--hash-dim", type=int, default=64)
    p.add_argument("--hash-seed", type=int, default=0)
    p.add_argument("--edge-dim", type=int, default=8)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_build_samples)

    p = sub.add_parser("train", help="train the graph network")
    p.add_argument("--samples", required=True)
    p.add_argument("--config", help="training TOML (learning_rate, epochs, ...)")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_train)

    p = sub.add_parser("predict", help="predict debate winners")
    p.add_argument("--model", required=True)
    p.add_argument("--samples", required=True)
    p.set_defaults(fn=_cmd_predict)

    p = sub.add_parser("run", help="run a configured experiment")
    p.add_argument("--config", required=True)
    p.add_argument("--json-out", help="also write the JSON report here")
    p.set_defaults(fn=_cmd_run)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except EnumerationCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE_CAP
    except PipelineStageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if isinstance(exc.__cause__, EnumerationCapError):
            return EXIT_RESOURCE_CAP
        return EXIT_VALIDATION if isinstance(
            exc.__cause__, _VALIDATION_ERRORS
        ) else EXIT_ERROR
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (TrainingDivergedError, NonFiniteActivationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
