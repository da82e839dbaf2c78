"""Local mini-batch SGD on one owner's training partition.

The objective is mean cross-entropy plus l2/2 * ||W||^2 over weight
matrices (biases unregularized). Epoch shuffles are seeded per
(seed, global epoch index) so a federated schedule of R rounds x E epochs
replays the exact batch sequence of a single R*E-epoch run.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from agrifed.errors import NonFiniteLoss, SchemaMismatch
from agrifed.fl.data import design_matrix, holdout_split
from agrifed.fl.models import ModelWeights, forward_logits, log_softmax, softmax
from agrifed.store.documents import Dataset

_U64 = 2**64


@dataclass(frozen=True)
class Hyperparams:
    rounds: int = 5
    local_epochs: int = 3
    batch_size: int = 16
    learning_rate: float = 0.1
    l2: float = 1e-4
    seed: int = 0

    def __post_init__(self):
        if self.rounds < 1 or self.local_epochs < 1 or self.batch_size < 1:
            raise ValueError("rounds, local_epochs and batch_size must be >= 1")
        if self.learning_rate < 0:
            raise ValueError("learning_rate must be non-negative")
        if self.l2 < 0:
            raise ValueError("l2 must be non-negative")

    def to_json(self) -> dict:
        return {
            "rounds": self.rounds,
            "local_epochs": self.local_epochs,
            "batch_size": self.batch_size,
            "learning_rate": self.learning_rate,
            "l2": self.l2,
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Hyperparams":
        return cls(**doc)


@dataclass
class LocalUpdate:
    weights: ModelWeights
    sample_count: int
    train_loss: float
    farmer: str = ""
    round: int = 0


def loss_and_grads(
    weights: ModelWeights, x: np.ndarray, y: np.ndarray, l2: float
) -> tuple[float, list[np.ndarray]]:
    """Objective value and analytic gradients on a batch."""
    n = x.shape[0]
    onehot = np.zeros((n, weights.num_classes))
    onehot[np.arange(n), y] = 1.0

    if weights.model_type == "logistic_regression":
        w, b = weights.tensors
        logits = x @ w.T + b
        probs = softmax(logits)
        ce = -log_softmax(logits)[np.arange(n), y].mean()
        gl = (probs - onehot) / n
        grads = [gl.T @ x + l2 * w, gl.sum(axis=0)]
        reg = 0.5 * l2 * float((w**2).sum())
        return float(ce + reg), grads

    w1, b1, w2, b2 = weights.tensors
    pre = x @ w1.T + b1
    hidden = np.maximum(pre, 0.0)
    logits = hidden @ w2.T + b2
    probs = softmax(logits)
    ce = -log_softmax(logits)[np.arange(n), y].mean()
    gl = (probs - onehot) / n
    g_w2 = gl.T @ hidden + l2 * w2
    g_b2 = gl.sum(axis=0)
    d_hidden = (gl @ w2) * (pre > 0)
    g_w1 = d_hidden.T @ x + l2 * w1
    g_b1 = d_hidden.sum(axis=0)
    reg = 0.5 * l2 * float((w1**2).sum() + (w2**2).sum())
    return float(ce + reg), [g_w1, g_b1, g_w2, g_b2]


def mean_cross_entropy(weights: ModelWeights, x: np.ndarray, y: np.ndarray) -> float:
    logits = forward_logits(weights, x)
    return float(-log_softmax(logits)[np.arange(x.shape[0]), y].mean())


def _epoch_order(seed: int, global_epoch: int, n: int) -> np.ndarray:
    rng = np.random.default_rng([seed % _U64, global_epoch])
    return rng.permutation(n)


def local_train(
    start: ModelWeights,
    dataset: Dataset,
    hp: Hyperparams,
    epoch_offset: int = 0,
    farmer: str = "",
    round_index: int = 0,
) -> LocalUpdate:
    """Train on the dataset's 80% partition and report the update.

    ``epoch_offset`` positions this call inside a federated schedule so the
    shuffle stream continues across rounds.
    """
    x_all, y_all = design_matrix(dataset)
    if x_all.shape[1] != start.feature_dim:
        raise SchemaMismatch(
            f"dataset encodes to {x_all.shape[1]} features, model expects {start.feature_dim}"
        )
    if len(dataset.label_classes) != start.num_classes:
        raise SchemaMismatch("dataset classes do not match the model")

    train_idx, _ = holdout_split(dataset)
    x, y = x_all[train_idx], y_all[train_idx]
    n = x.shape[0]

    weights = start.copy()
    for epoch in range(hp.local_epochs):
        order = _epoch_order(hp.seed, epoch_offset + epoch, n)
        for lo in range(0, n, hp.batch_size):
            batch = order[lo : lo + hp.batch_size]
            _, grads = loss_and_grads(weights, x[batch], y[batch], hp.l2)
            for tensor, grad in zip(weights.tensors, grads):
                tensor -= hp.learning_rate * grad
        if not all(np.all(np.isfinite(t)) for t in weights.tensors):
            raise NonFiniteLoss(f"training diverged at epoch {epoch_offset + epoch}")

    final_loss = mean_cross_entropy(weights, x, y)
    if not np.isfinite(final_loss):
        raise NonFiniteLoss("final training loss is not finite")

    return LocalUpdate(
        weights=weights,
        sample_count=n,
        train_loss=final_loss,
        farmer=farmer,
        round=round_index,
    )
