"""Model families and black-box prediction.

Two families are supported: multinomial logistic regression and a
one-hidden-layer ReLU MLP. Weights serialize to JSON with explicit shapes
and row-major values; Python's float repr round-trips bit-exactly, which
the wire format relies on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from agrifed.errors import DimensionMismatch, InvalidDimensions, NonFiniteInput

MODEL_TYPES = ("logistic_regression", "mlp_1hidden")

DEFAULT_HIDDEN_DIM = 16


@dataclass
class ModelWeights:
    model_type: str
    feature_dim: int
    num_classes: int
    hidden_dim: int | None
    tensors: list[np.ndarray]

    def expected_shapes(self) -> list[tuple[int, ...]]:
        d, c, h = self.feature_dim, self.num_classes, self.hidden_dim
        if self.model_type == "logistic_regression":
            return [(c, d), (c,)]
        if self.model_type == "mlp_1hidden":
            return [(h, d), (h,), (c, h), (c,)]
        raise InvalidDimensions(f"unknown model type {self.model_type!r}")

    def validate(self) -> "ModelWeights":
        shapes = [t.shape for t in self.tensors]
        if shapes != self.expected_shapes():
            raise InvalidDimensions(f"tensor shapes {shapes} != expected {self.expected_shapes()}")
        for t in self.tensors:
            if not np.all(np.isfinite(t)):
                raise NonFiniteInput("weights contain non-finite entries")
        return self

    def copy(self) -> "ModelWeights":
        return ModelWeights(
            model_type=self.model_type,
            feature_dim=self.feature_dim,
            num_classes=self.num_classes,
            hidden_dim=self.hidden_dim,
            tensors=[t.copy() for t in self.tensors],
        )


def init_global(
    model_type: str,
    feature_dim: int,
    num_classes: int,
    hidden_dim: int | None = None,
    seed: int = 0,
) -> ModelWeights:
    """Deterministic global initialization.

    Logistic regression starts at zero; the MLP draws each layer from
    uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)) with the given seed.
    """
    if model_type not in MODEL_TYPES:
        raise InvalidDimensions(f"unknown model type {model_type!r}")
    if feature_dim < 1 or num_classes < 2:
        raise InvalidDimensions("need feature_dim >= 1 and num_classes >= 2")

    if model_type == "logistic_regression":
        tensors = [np.zeros((num_classes, feature_dim)), np.zeros(num_classes)]
        return ModelWeights(model_type, feature_dim, num_classes, None, tensors).validate()

    h = DEFAULT_HIDDEN_DIM if hidden_dim is None else hidden_dim
    if h < 1:
        raise InvalidDimensions("hidden_dim must be >= 1")
    rng = np.random.default_rng(seed)
    tensors = []
    for fan_in, shape_w, shape_b in [
        (feature_dim, (h, feature_dim), (h,)),
        (h, (num_classes, h), (num_classes,)),
    ]:
        bound = 1.0 / np.sqrt(fan_in)
        tensors.append(rng.uniform(-bound, bound, size=shape_w))
        tensors.append(rng.uniform(-bound, bound, size=shape_b))
    return ModelWeights(model_type, feature_dim, num_classes, h, tensors).validate()


def forward_logits(weights: ModelWeights, x: np.ndarray) -> np.ndarray:
    """Class logits for a batch (n, feature_dim) -> (n, num_classes)."""
    if weights.model_type == "logistic_regression":
        w, b = weights.tensors
        return x @ w.T + b
    w1, b1, w2, b2 = weights.tensors
    hidden = np.maximum(x @ w1.T + b1, 0.0)
    return hidden @ w2.T + b2


def log_softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))


def softmax(logits: np.ndarray) -> np.ndarray:
    return np.exp(log_softmax(logits))


@dataclass(frozen=True)
class Prediction:
    probabilities: tuple[float, ...]
    predicted_class: str


def predict(weights: ModelWeights, features, class_names: list[str]) -> Prediction:
    """Black-box inference on one feature row.

    Probabilities are max-subtraction stabilized and sum to 1; argmax ties
    resolve to the lowest class index.
    """
    x = np.asarray(features, dtype=float)
    if x.ndim != 1 or x.shape[0] != weights.feature_dim:
        raise DimensionMismatch(
            f"feature row length {x.shape} != feature_dim {weights.feature_dim}"
        )
    if not np.all(np.isfinite(x)):
        raise NonFiniteInput("feature row contains non-finite entries")
    if len(class_names) != weights.num_classes:
        raise DimensionMismatch("class_names length != num_classes")
    probs = softmax(forward_logits(weights, x[None, :])[0])
    idx = int(np.argmax(probs))  # first maximum wins ties
    return Prediction(
        probabilities=tuple(float(p) for p in probs),
        predicted_class=class_names[idx],
    )


def weights_to_json(weights: ModelWeights) -> dict:
    return {
        "model_type": weights.model_type,
        "feature_dim": weights.feature_dim,
        "num_classes": weights.num_classes,
        "hidden_dim": weights.hidden_dim,
        "tensors": [
            {"shape": list(t.shape), "values": [float(v) for v in t.ravel()]}
            for t in weights.tensors
        ],
    }


def weights_from_json(doc: dict) -> ModelWeights:
    tensors = [
        np.array(t["values"], dtype=float).reshape(t["shape"]) for t in doc["tensors"]
    ]
    return ModelWeights(
        model_type=doc["model_type"],
        feature_dim=doc["feature_dim"],
        num_classes=doc["num_classes"],
        hidden_dim=doc["hidden_dim"],
        tensors=tensors,
    ).validate()
