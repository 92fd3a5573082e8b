"""Debate winner prediction from argumentation-framework extensions.

Two phases: debates annotated with ADUs and typed relations are
encoded as abstract argumentation frameworks whose naive or preferred
extensions are enumerated exactly; each extension then becomes a
complete bipartite graph with sentence-embedding node features, and a
small graph network learns to predict the winning stance.
"""

__version__ = "0.1.0"

from .apx import export_apx, framework_from_apx, parse_apx
from .convert import ConversionResult, convert_tabular_debate
from .corpus import (
    ADU,
    Debate,
    DebateParseError,
    DebateValidationError,
    Phase,
    Relation,
    RelationKind,
    Stance,
    StatsReport,
    corpus_stats,
    load_corpus,
    load_debate,
    save_debate,
)
from .framework import (
    AbstractArgument,
    ArgumentationFramework,
    StanceTieError,
    af_summary,
    encode_af,
)
from .network import (
    GNDims,
    GNParameters,
    TrainConfig,
    gn_forward,
    gn_gradient,
    gn_loss,
    init_parameters,
    load_checkpoint,
    predict_debate,
    save_checkpoint,
    train,
)
from .pipeline import (
    ExperimentConfig,
    EvalReport,
    baseline_atb,
    baseline_gnb,
    baseline_random,
    build_corpus_samples,
    confusion_matrix,
    metrics,
    raw_graph_sample,
    run_experiment,
    split_debates,
)
from .samples import (
    EmbeddingTable,
    LearningSample,
    build_bipartite,
    hash_embed,
    hash_embedding_table,
    init_features,
    load_embeddings,
    save_embeddings,
)
from .semantics import (
    EnumerationCapError,
    Extension,
    Semantics,
    brute_force_extensions,
    is_admissible,
    is_conflict_free,
    naive_extensions,
    preferred_extensions,
)
from .synthetic import generate_synthetic_corpus
