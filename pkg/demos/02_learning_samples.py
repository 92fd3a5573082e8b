"""From extensions to bipartite learning samples.

Shows Phase II's data preparation: every extension becomes a complete
bipartite graph split by stance, node features are pooled ADU
embeddings, edges share one constant feature vector, and the winner
label rides along as the training target.  Uses the deterministic
hash embedder, so no pretrained encoder is required.

Run:  python demos/02_learning_samples.py
"""

import numpy as np

from arbiter import (
    build_bipartite,
    encode_af,
    hash_embed,
    hash_embedding_table,
    init_features,
    naive_extensions,
)
from arbiter.synthetic import generate_synthetic_corpus

# ----------------------------------------------------------------------
# The hash embedder: reproducible pseudo-random unit vectors per text.
# ----------------------------------------------------------------------

v1 = hash_embed("School uniforms reduce visible inequality.", 16, seed=0)
v2 = hash_embed("School uniforms reduce visible inequality.", 16, seed=0)
v3 = hash_embed("Uniforms suppress personal identity.", 16, seed=0)
print("same text, same vector:", bool(np.array_equal(v1, v2)))
print("norm:", round(float(np.linalg.norm(v1)), 12))
print("cosine to a different text:", round(float(v1 @ v3), 3))

# ----------------------------------------------------------------------
# Build samples for one synthetic debate.
# ----------------------------------------------------------------------

debates, _ = generate_synthetic_corpus(2, 0.5, seed=3)
debate = debates[0]
table = hash_embedding_table([debate], dimension=16, seed=0)

af = encode_af(debate)
extensions = naive_extensions(af)
print(f"\ndebate {debate.id}: {len(debate.adus)} adus -> "
      f"{len(af.arguments)} arguments, {len(extensions)} naive extensions")

for ext in extensions[:3]:
    graph = build_bipartite(ext, af)
    sample = init_features(graph, debate, table)
    favour = sum(1 for s in sample.node_stances if s.value == "F")
    against = sample.n_nodes - favour
    print(
        f"  extension {sorted(ext.argument_ids)}: "
        f"{favour} favour x {against} against -> {sample.n_edges} edges "
        f"(= 2*{favour}*{against}), label {sample.label}"
    )

sample = init_features(build_bipartite(extensions[0], af), debate, table)
print("\nfirst sample tensors:")
print("  node features:", sample.node_features.shape)
print("  edge features:", sample.edge_features.shape,
      "(all ones:", bool(np.all(sample.edge_features == 1.0)), ")")
print("  global input:", sample.global_features, " target:", sample.label)

# A node pooling sanity check: node features are the mean of their
# member ADU embeddings, so singleton nodes match the table exactly.
argument = af.arguments[sample.node_ids[0]]
if len(argument.adu_ids) == 1:
    (adu_id,) = argument.adu_ids
    match = np.allclose(sample.node_features[0], table.lookup(debate.id, adu_id))
    print("  singleton node equals its ADU embedding:", match)
