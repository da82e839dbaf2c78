"""Sample-count-weighted federated averaging."""

from __future__ import annotations

import numpy as np

from agrifed.errors import EmptyUpdateSet, RoundMismatch, ShapeMismatch
from agrifed.fl.models import ModelWeights
from agrifed.fl.training import LocalUpdate


def fedavg(updates: list[LocalUpdate]) -> ModelWeights:
    """Per-tensor weighted mean of updates, weights sample_count / total.

    A single update is returned unchanged (copied).
    """
    if not updates:
        raise EmptyUpdateSet("no updates to aggregate")

    first = updates[0]
    if len(updates) == 1:
        return first.weights.copy()

    for u in updates[1:]:
        if u.round != first.round:
            raise RoundMismatch(f"update rounds differ: {u.round} != {first.round}")
        if (
            u.weights.model_type != first.weights.model_type
            or len(u.weights.tensors) != len(first.weights.tensors)
            or any(
                a.shape != b.shape
                for a, b in zip(u.weights.tensors, first.weights.tensors)
            )
        ):
            raise ShapeMismatch("updates carry incompatible tensor shapes")

    total = float(sum(u.sample_count for u in updates))
    tensors = [np.zeros_like(t) for t in first.weights.tensors]
    for u in updates:
        w = u.sample_count / total
        for acc, t in zip(tensors, u.weights.tensors):
            acc += w * t

    return ModelWeights(
        model_type=first.weights.model_type,
        feature_dim=first.weights.feature_dim,
        num_classes=first.weights.num_classes,
        hidden_dim=first.weights.hidden_dim,
        tensors=tensors,
    )
