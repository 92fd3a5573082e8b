"""Graph network over bipartite extension samples.

One message-passing block: an edge MLP updates every edge from its
features, both endpoint features, and the global input; per-node means
of incoming edge updates feed a node MLP; means of all updated edges
and nodes feed a global MLP ending in a 2-unit linear layer and a
softmax over {favour wins, against wins}.  All aggregations are
elementwise means with the zero-vector convention on empty sets, so
outputs are invariant to node and edge ordering.

Everything is plain numpy with analytic gradients; training is seeded
stochastic gradient descent and fully deterministic.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .samples import LearningSample

__all__ = [
    "GNDims",
    "GNParameters",
    "GNGradients",
    "TrainConfig",
    "NonFiniteActivationError",
    "TrainingDivergedError",
    "init_parameters",
    "gn_forward",
    "gn_loss",
    "gn_gradient",
    "train",
    "predict_debate",
    "save_checkpoint",
    "load_checkpoint",
    "iter_arrays",
]

Layer = tuple[np.ndarray, np.ndarray]  # weight (fan_in, fan_out), bias (fan_out,)

_PROB_FLOOR = 1e-12
CHECKPOINT_VERSION = 1


class NonFiniteActivationError(FloatingPointError):
    """A forward pass produced NaN or infinite activations."""


class TrainingDivergedError(RuntimeError):
    """Training hit a non-finite loss and was aborted."""

    def __init__(self, epoch: int, loss: float):
        super().__init__(f"non-finite loss {loss!r} at epoch {epoch}")
        self.epoch = epoch
        self.loss = loss


@dataclass(frozen=True)
class GNDims:
    """Feature and layer widths of one graph-network block."""

    node_dim: int
    edge_dim: int
    global_dim: int = 2
    hidden_dim: int = 128
    message_dim: int = 128
    n_classes: int = 2


@dataclass
class GNParameters:
    """Weights of the three update MLPs plus the classification head.

    Each MLP has two ReLU hidden layers; the edge and node MLPs end in
    a linear `message_dim` layer, the global MLP in an `n_classes`
    linear layer feeding the softmax.
    """

    dims: GNDims
    edge_mlp: list[Layer]
    node_mlp: list[Layer]
    global_mlp: list[Layer]
    rng_seed: int


@dataclass
class GNGradients:
    edge_mlp: list[Layer]
    node_mlp: list[Layer]
    global_mlp: list[Layer]


@dataclass(frozen=True)
class TrainConfig:
    """Optimization settings; the loss is fixed to two-class cross-entropy."""

    learning_rate: float = 1e-3
    epochs: int = 100
    batch_size: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        if self.learning_rate < 0:
            raise ValueError("learning_rate must be >= 0")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


def _init_layer(
    rng: np.random.Generator, fan_in: int, fan_out: int, *, head: bool = False
) -> Layer:
    # He-style fan-in-scaled uniform; the classification head gets a
    # much smaller scale so fresh models emit near-uniform class
    # probabilities regardless of upstream feature magnitudes
    bound = np.sqrt(6.0) / fan_in if head else np.sqrt(6.0 / fan_in)
    weight = rng.uniform(-bound, bound, size=(fan_in, fan_out))
    return weight, np.zeros(fan_out)


def _init_mlp(
    rng: np.random.Generator, widths: Sequence[int], *, head: bool = False
) -> list[Layer]:
    last = len(widths) - 2
    return [
        _init_layer(rng, widths[i], widths[i + 1], head=head and i == last)
        for i in range(len(widths) - 1)
    ]


def init_parameters(
    node_dim: int,
    edge_dim: int,
    *,
    hidden_dim: int = 128,
    message_dim: int = 128,
    seed: int = 0,
) -> GNParameters:
    """Seeded fan-in-scaled uniform initialization of all three MLPs."""
    dims = GNDims(
        node_dim=node_dim,
        edge_dim=edge_dim,
        hidden_dim=hidden_dim,
        message_dim=message_dim,
    )
    rng = np.random.default_rng(seed)
    h, m, g = dims.hidden_dim, dims.message_dim, dims.global_dim
    edge_mlp = _init_mlp(rng, [edge_dim + 2 * node_dim + g, h, h, m])
    node_mlp = _init_mlp(rng, [m + node_dim + g, h, h, m])
    global_mlp = _init_mlp(rng, [2 * m + g, h, h, dims.n_classes], head=True)
    return GNParameters(
        dims=dims,
        edge_mlp=edge_mlp,
        node_mlp=node_mlp,
        global_mlp=global_mlp,
        rng_seed=seed,
    )


def _mlp_forward(layers: list[Layer], x: np.ndarray):
    """Forward through ReLU-hidden / linear-output MLP, keeping caches."""
    caches = []
    h = x
    last = len(layers) - 1
    for i, (weight, bias) in enumerate(layers):
        z = h @ weight + bias
        caches.append((h, z))
        h = z if i == last else np.maximum(z, 0.0)
    return h, caches


def _mlp_backward(layers: list[Layer], caches, d_out: np.ndarray):
    """Gradients of all layers plus the gradient w.r.t. the MLP input."""
    grads: list[Layer] = [None] * len(layers)  # type: ignore[list-item]
    d = d_out
    last = len(layers) - 1
    for i in range(last, -1, -1):
        weight, _ = layers[i]
        h, z = caches[i]
        if i != last:
            d = d * (z > 0.0)
        grads[i] = (h.T @ d, d.sum(axis=0))
        d = d @ weight.T
    return grads, d


def _check_sample_dims(dims: GNDims, sample: LearningSample) -> None:
    if sample.n_nodes == 0:
        raise ValueError("sample has no nodes")
    if sample.node_features.shape[1] != dims.node_dim:
        raise ValueError(
            f"node feature dim {sample.node_features.shape[1]} != "
            f"model dim {dims.node_dim}"
        )
    if sample.n_edges and sample.edge_features.shape[1] != dims.edge_dim:
        raise ValueError(
            f"edge feature dim {sample.edge_features.shape[1]} != "
            f"model dim {dims.edge_dim}"
        )
    if sample.global_features.shape[0] != dims.global_dim:
        raise ValueError(
            f"global feature dim {sample.global_features.shape[0]} != "
            f"model dim {dims.global_dim}"
        )


def _forward(params: GNParameters, sample: LearningSample):
    """Full block forward; returns probabilities plus backprop state."""
    _check_sample_dims(params.dims, sample)
    dims = params.dims
    nodes = sample.node_features
    u = sample.global_features
    n = sample.n_nodes
    k = sample.n_edges

    if k:
        senders, receivers = sample.senders, sample.receivers
        edge_in = np.concatenate(
            [
                sample.edge_features,
                nodes[receivers],
                nodes[senders],
                np.tile(u, (k, 1)),
            ],
            axis=1,
        )
        edge_out, edge_caches = _mlp_forward(params.edge_mlp, edge_in)
        incoming_sum = np.zeros((n, dims.message_dim))
        np.add.at(incoming_sum, receivers, edge_out)
        incoming_count = np.bincount(receivers, minlength=n).astype(float)
        incoming_mean = incoming_sum / np.maximum(incoming_count, 1.0)[:, None]
        edge_mean = edge_out.mean(axis=0)
    else:
        edge_out, edge_caches = None, None
        incoming_count = np.zeros(n)
        incoming_mean = np.zeros((n, dims.message_dim))
        edge_mean = np.zeros(dims.message_dim)

    node_in = np.concatenate([incoming_mean, nodes, np.tile(u, (n, 1))], axis=1)
    node_out, node_caches = _mlp_forward(params.node_mlp, node_in)
    node_mean = node_out.mean(axis=0)

    global_in = np.concatenate([edge_mean, node_mean, u])[None, :]
    logits, global_caches = _mlp_forward(params.global_mlp, global_in)
    logits = logits[0]
    if not np.all(np.isfinite(logits)):
        raise NonFiniteActivationError(
            f"non-finite logits for debate {sample.debate_id!r}"
        )
    shifted = logits - logits.max()
    exp = np.exp(shifted)
    probs = exp / exp.sum()
    state = {
        "edge_caches": edge_caches,
        "node_caches": node_caches,
        "global_caches": global_caches,
        "incoming_count": incoming_count,
        "probs": probs,
    }
    return probs, state


def gn_forward(params: GNParameters, sample: LearningSample) -> np.ndarray:
    """Class probability pair (favour, against); sums to 1."""
    probs, _ = _forward(params, sample)
    return probs


def gn_loss(probs: np.ndarray, label: int) -> float:
    """Two-class cross-entropy with the probability floored at 1e-12."""
    if label not in (0, 1):
        raise ValueError(f"label must be 0 or 1, got {label!r}")
    return float(-np.log(max(float(probs[label]), _PROB_FLOOR)))


def _backward(
    params: GNParameters, sample: LearningSample, state: dict, label: int
) -> GNGradients:
    dims = params.dims
    n = sample.n_nodes
    k = sample.n_edges
    probs = state["probs"]

    one_hot = np.zeros(dims.n_classes)
    one_hot[label] = 1.0
    d_logits = (probs - one_hot)[None, :]

    global_grads, d_global_in = _mlp_backward(
        params.global_mlp, state["global_caches"], d_logits
    )
    d_global_in = d_global_in[0]
    m = dims.message_dim
    d_edge_mean = d_global_in[:m]
    d_node_mean = d_global_in[m : 2 * m]

    d_node_out = np.tile(d_node_mean / n, (n, 1))
    node_grads, d_node_in = _mlp_backward(
        params.node_mlp, state["node_caches"], d_node_out
    )
    d_incoming_mean = d_node_in[:, :m]

    if k:
        receivers = sample.receivers
        counts = state["incoming_count"]
        d_edge_out = d_incoming_mean[receivers] / counts[receivers][:, None]
        d_edge_out = d_edge_out + d_edge_mean[None, :] / k
        edge_grads, _ = _mlp_backward(
            params.edge_mlp, state["edge_caches"], d_edge_out
        )
    else:
        edge_grads = [
            (np.zeros_like(w), np.zeros_like(b)) for w, b in params.edge_mlp
        ]

    return GNGradients(
        edge_mlp=edge_grads, node_mlp=node_grads, global_mlp=global_grads
    )


def gn_gradient(
    params: GNParameters, sample: LearningSample, label: int | None = None
) -> GNGradients:
    """Analytic gradient of cross-entropy(gn_forward) w.r.t. all weights.

    `label` defaults to the sample's own label.
    """
    if label is None:
        label = sample.label
    _, state = _forward(params, sample)
    return _backward(params, sample, state, label)


def _loss_and_gradient(params: GNParameters, sample: LearningSample):
    probs, state = _forward(params, sample)
    loss = gn_loss(probs, sample.label)
    return loss, _backward(params, sample, state, sample.label)


def iter_arrays(obj: GNParameters | GNGradients) -> Iterator[np.ndarray]:
    """All weight arrays in deterministic order (for tests and updates)."""
    for mlp in (obj.edge_mlp, obj.node_mlp, obj.global_mlp):
        for weight, bias in mlp:
            yield weight
            yield bias


def _copy_parameters(params: GNParameters) -> GNParameters:
    clone = lambda layers: [(w.copy(), b.copy()) for w, b in layers]
    return GNParameters(
        dims=params.dims,
        edge_mlp=clone(params.edge_mlp),
        node_mlp=clone(params.node_mlp),
        global_mlp=clone(params.global_mlp),
        rng_seed=params.rng_seed,
    )


def _zero_gradients(params: GNParameters) -> GNGradients:
    zeros = lambda layers: [(np.zeros_like(w), np.zeros_like(b)) for w, b in layers]
    return GNGradients(
        edge_mlp=zeros(params.edge_mlp),
        node_mlp=zeros(params.node_mlp),
        global_mlp=zeros(params.global_mlp),
    )


def _accumulate(total: GNGradients, part: GNGradients) -> None:
    for dst, src in zip(iter_arrays(total), iter_arrays(part)):
        dst += src


def train(
    params: GNParameters,
    samples: Sequence[LearningSample],
    cfg: TrainConfig,
) -> tuple[GNParameters, list[float]]:
    """Seeded SGD on cross-entropy; batch gradients are sum-reduced.

    Returns freshly trained parameters (the input object is never
    mutated) and the mean per-sample loss of each epoch.  Raises
    TrainingDivergedError on a non-finite loss.
    """
    if not samples:
        raise ValueError("no training samples")
    params = _copy_parameters(params)
    rng = np.random.default_rng(cfg.seed)
    history: list[float] = []
    for epoch in range(cfg.epochs):
        order = rng.permutation(len(samples))
        epoch_loss = 0.0
        for start in range(0, len(order), cfg.batch_size):
            batch = order[start : start + cfg.batch_size]
            total = _zero_gradients(params)
            for idx in batch:
                try:
                    loss, grads = _loss_and_gradient(params, samples[idx])
                except NonFiniteActivationError as exc:
                    raise TrainingDivergedError(epoch, float("nan")) from exc
                if not np.isfinite(loss):
                    raise TrainingDivergedError(epoch, loss)
                epoch_loss += loss
                _accumulate(total, grads)
            for weights, grad in zip(iter_arrays(params), iter_arrays(total)):
                weights -= cfg.learning_rate * grad
        history.append(epoch_loss / len(samples))
    return params, history


@dataclass(frozen=True)
class DebatePrediction:
    label: int
    confidence: float


def predict_debate(
    params: GNParameters, samples: Sequence[LearningSample]
) -> DebatePrediction:
    """Debate-level outcome: majority vote over per-sample argmax classes.

    Vote ties go to the class with the larger mean softmax probability;
    confidence is the mean probability of the chosen class.
    """
    if not samples:
        raise ValueError("predict_debate needs at least one sample")
    probs = np.stack([gn_forward(params, s) for s in samples])
    votes = np.bincount(probs.argmax(axis=1), minlength=2)
    if votes[0] != votes[1]:
        label = int(votes.argmax())
    else:
        label = int(probs.mean(axis=0).argmax())
    return DebatePrediction(label=label, confidence=float(probs[:, label].mean()))


def save_checkpoint(params: GNParameters, path: str | Path) -> None:
    """JSON checkpoint with a shape manifest; floats round-trip exactly."""

    def dump_mlp(layers: list[Layer]) -> list[dict]:
        return [
            {
                "weight_shape": list(w.shape),
                "weight": w.tolist(),
                "bias": b.tolist(),
            }
            for w, b in layers
        ]

    payload = {
        "format_version": CHECKPOINT_VERSION,
        "rng_seed": params.rng_seed,
        "dims": asdict(params.dims),
        "mlps": {
            "edge": dump_mlp(params.edge_mlp),
            "node": dump_mlp(params.node_mlp),
            "global": dump_mlp(params.global_mlp),
        },
    }
    Path(path).write_text(json.dumps(payload), encoding="utf-8")


def load_checkpoint(path: str | Path) -> GNParameters:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if data.get("format_version") != CHECKPOINT_VERSION:
        raise ValueError("unsupported checkpoint version")

    def load_mlp(entries: list[dict]) -> list[Layer]:
        layers = []
        for entry in entries:
            weight = np.array(entry["weight"], dtype=np.float64)
            bias = np.array(entry["bias"], dtype=np.float64)
            if list(weight.shape) != entry["weight_shape"]:
                raise ValueError(
                    f"checkpoint weight shape {list(weight.shape)} does not "
                    f"match manifest {entry['weight_shape']}"
                )
            layers.append((weight, bias))
        return layers

    return GNParameters(
        dims=GNDims(**data["dims"]),
        edge_mlp=load_mlp(data["mlps"]["edge"]),
        node_mlp=load_mlp(data["mlps"]["node"]),
        global_mlp=load_mlp(data["mlps"]["global"]),
        rng_seed=data["rng_seed"],
    )
