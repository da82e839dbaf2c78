"""Local model training, federated aggregation, and black-box prediction."""

from agrifed.fl.models import (
    MODEL_TYPES,
    ModelWeights,
    Prediction,
    init_global,
    predict,
    weights_from_json,
    weights_to_json,
)
from agrifed.fl.data import design_matrix, encode_feature_row, feature_dim, holdout_split, row_digest
from agrifed.fl.training import Hyperparams, LocalUpdate, local_train
from agrifed.fl.aggregate import fedavg

__all__ = [
    "MODEL_TYPES",
    "Hyperparams",
    "LocalUpdate",
    "ModelWeights",
    "Prediction",
    "design_matrix",
    "encode_feature_row",
    "feature_dim",
    "fedavg",
    "holdout_split",
    "init_global",
    "local_train",
    "predict",
    "row_digest",
    "weights_from_json",
    "weights_to_json",
]
