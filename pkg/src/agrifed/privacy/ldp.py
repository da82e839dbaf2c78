"""Local perturbation of summaries with the Laplace mechanism.

The total budget epsilon is split equally across the summary's dimensions:
each entry receives independent Laplace(0, b) noise with
b = dims * sensitivity / epsilon. With entries bounded in [0, 1] the
per-dimension L1 sensitivity is 1, so the composed release satisfies the
epsilon guarantee: for summaries differing by at most 1 per coordinate the
output-density ratio is bounded by exp(epsilon).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from agrifed.errors import NonPositiveArgument
from agrifed.privacy.summary import SummaryVector


@dataclass(frozen=True)
class Sketch:
    """The only dataset-derived object that leaves an owner's compute slot.

    ``noised`` entries may lie outside [0, 1]; the noise is unbounded.
    """

    noised: tuple[float, ...]
    epsilon: float
    schema_hash: str
    projected: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.epsilon <= 0:
            raise NonPositiveArgument("epsilon must be positive")

    @property
    def dims(self) -> int:
        return len(self.noised)


def laplace_scale(epsilon: float, sensitivity: float, dims: int) -> float:
    """Per-dimension Laplace scale b = dims * sensitivity / epsilon."""
    if not (isinstance(dims, (int, np.integer)) and dims > 0):
        raise NonPositiveArgument("dims must be a positive integer")
    if not (math.isfinite(epsilon) and epsilon > 0):
        raise NonPositiveArgument("epsilon must be positive and finite")
    if not (math.isfinite(sensitivity) and sensitivity > 0):
        raise NonPositiveArgument("sensitivity must be positive and finite")
    return dims * sensitivity / epsilon


def perturb(summary: SummaryVector, epsilon: float, rng_seed: int | None = None) -> Sketch:
    """Release a summary under the given total budget.

    Seeded runs are reproducible; with no seed the generator draws fresh
    OS entropy.
    """
    b = laplace_scale(epsilon, 1.0, summary.dims)
    rng = np.random.default_rng(rng_seed)
    noise = rng.laplace(loc=0.0, scale=b, size=summary.dims)
    noised = np.asarray(summary.values, dtype=float) + noise
    return Sketch(
        noised=tuple(float(v) for v in noised),
        epsilon=float(epsilon),
        schema_hash=summary.schema_hash,
    )


def sketch_to_json(sketch: Sketch) -> dict:
    return {
        "noised": list(sketch.noised),
        "epsilon": sketch.epsilon,
        "schema_hash": sketch.schema_hash,
        "projected": list(sketch.projected) if sketch.projected is not None else None,
    }


def sketch_from_json(doc: dict) -> Sketch:
    projected = doc.get("projected")
    return Sketch(
        noised=tuple(float(v) for v in doc["noised"]),
        epsilon=float(doc["epsilon"]),
        schema_hash=doc["schema_hash"],
        projected=tuple(float(v) for v in projected) if projected is not None else None,
    )
