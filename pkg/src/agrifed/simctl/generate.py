"""Deterministic synthetic farm datasets.

Rows are per-class Gaussian-mean layouts plus Beta-distributed column noise.
Two knobs matter:

- ``class_sep`` moves class means apart, controlling learnability;
- ``group_skew`` shifts the Beta shape and the label balance between farmer
  groups, controlling how far apart two groups' dataset summaries sit
  (summaries normalize away location and scale, so a plain mean shift would
  be invisible; skew and label balance are not).

Everything is a pure function of (spec.seed, group, salt), so repeated runs
produce identical CSV bytes.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

_U64 = 2**64


@dataclass(frozen=True)
class DatasetSpec:
    feature_dim: int = 4
    classes: int = 2
    rows_per_farmer: int = 200
    class_sep: float = 2.0
    group_skew: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.feature_dim < 1 or self.classes < 2 or self.rows_per_farmer < 2:
            raise ValueError("need feature_dim >= 1, classes >= 2, rows_per_farmer >= 2")
        if not (0.0 <= self.group_skew <= 1.0):
            raise ValueError("group_skew must lie in [0, 1]")


def class_names(spec: DatasetSpec) -> list[str]:
    return [f"c{i}" for i in range(spec.classes)]


def _class_means(spec: DatasetSpec) -> np.ndarray:
    means = np.zeros((spec.classes, spec.feature_dim))
    for c in range(spec.classes):
        means[c, c % spec.feature_dim] = 1.0 + c // spec.feature_dim
    return means * spec.class_sep


def _beta_params(group: int, skew: float) -> tuple[float, float]:
    a, b = 4.0 - 2.0 * skew, 4.0 + 4.0 * skew
    return (a, b) if group % 2 == 0 else (b, a)


def _label_probs(spec: DatasetSpec, group: int) -> np.ndarray:
    probs = np.ones(spec.classes)
    probs[group % spec.classes] += 2.0 * spec.group_skew
    return probs / probs.sum()


def _rng(spec: DatasetSpec, group: int, salt: int) -> np.random.Generator:
    return np.random.default_rng([spec.seed % _U64, group, salt])


def sample_rows(
    spec: DatasetSpec, group: int, salt: int, n: int | None = None
) -> tuple[list[list[str]], list[str]]:
    """(feature rows as cell text, label names) for one farmer."""
    n = spec.rows_per_farmer if n is None else n
    rng = _rng(spec, group, salt)
    names = class_names(spec)
    means = _class_means(spec)
    a, b = _beta_params(group, spec.group_skew)
    labels_idx = rng.choice(spec.classes, size=n, p=_label_probs(spec, group))
    noise = rng.beta(a, b, size=(n, spec.feature_dim))
    x = means[labels_idx] + noise
    rows = [[repr(float(v)) for v in x[i]] for i in range(n)]
    return rows, [names[i] for i in labels_idx]


def generate_csv(spec: DatasetSpec, group: int = 0, salt: int = 0) -> bytes:
    """A complete upload payload: header f0..f{d-1},label plus data rows."""
    rows, labels = sample_rows(spec, group, salt)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow([f"f{j}" for j in range(spec.feature_dim)] + ["label"])
    for r, y in zip(rows, labels):
        writer.writerow(r + [y])
    return buf.getvalue().encode("utf-8")


def generate_eval_rows(
    spec: DatasetSpec, group: int, salt: int, n: int
) -> tuple[list[list[str]], list[str]]:
    """Fresh rows from the same distribution, for held-out evaluation.

    Uses a salt offset far outside the farmer range so evaluation rows never
    collide with training draws.
    """
    return sample_rows(spec, group, salt + 1_000_003, n)
