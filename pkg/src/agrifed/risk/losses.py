"""Per-example loss collection inside an owner's compute slot.

Only (loss, member flag, owner) triples leave the slot; features and labels
never do. Member rows are the deterministic 80% training partition, holdout
rows supply the non-member population.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from agrifed.errors import EmptyPartition, SchemaMismatch
from agrifed.fl.data import design_matrix, holdout_split
from agrifed.fl.models import ModelWeights, forward_logits, log_softmax
from agrifed.store.documents import Dataset


@dataclass(frozen=True)
class LossSample:
    loss: float
    member: bool
    farmer: str


def collect_losses(model: ModelWeights, dataset: Dataset, farmer: str = "") -> list[LossSample]:
    """Cross-entropy of every row under the model, tagged member/holdout."""
    x, y = design_matrix(dataset)
    if x.shape[1] != model.feature_dim or len(dataset.label_classes) != model.num_classes:
        raise SchemaMismatch("dataset schema does not match the model")

    train_idx, hold_idx = holdout_split(dataset)
    if train_idx.size == 0 or hold_idx.size == 0:
        raise EmptyPartition(
            f"dataset {dataset.dataset_id} cannot supply both member and holdout losses"
        )

    log_probs = log_softmax(forward_logits(model, x))
    losses = -log_probs[np.arange(x.shape[0]), y]

    members = set(int(i) for i in train_idx)
    owner = farmer or dataset.owner
    return [
        LossSample(loss=float(losses[i]), member=(i in members), farmer=owner)
        for i in range(x.shape[0])
    ]
