"""Fixed-length dataset summaries.

Each numeric column contributes a (mean, std, min, max) block min-max
normalized by the column's own observed range, so every entry lands in
[0, 1]; the label column contributes its class-frequency histogram. Block
order follows the dataset's column order, which makes the summary length a
pure function of the schema.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from agrifed.errors import EmptyDataset, NonNumericFeature
from agrifed.store.documents import Column, Dataset


@dataclass(frozen=True)
class SummaryVector:
    values: tuple[float, ...]
    dims: int
    schema_hash: str

    def __post_init__(self):
        if len(self.values) != self.dims:
            raise ValueError("values length must equal dims")


def summary_dims(columns: list[Column], label_classes: list[str]) -> int:
    """Summary length for a schema: 4 per numeric column + one histogram bin
    per label class. Categorical feature columns contribute nothing."""
    n_numeric = sum(1 for c in columns if c.name != "label" and c.kind == "numeric")
    return 4 * n_numeric + len(label_classes)


def _numeric_block(raw: list[str]) -> tuple[float, float, float, float]:
    x = np.array([float(v.strip()) for v in raw], dtype=float)
    lo, hi = float(x.min()), float(x.max())
    if hi == lo:
        # constant column: pin to the midpoint convention
        return (0.5, 0.0, 0.0, 1.0)
    rng = hi - lo
    mean = (float(x.mean()) - lo) / rng
    std = float(x.std()) / rng  # population std, range-scaled
    return (mean, std, 0.0, 1.0)


def compute_summary(dataset: Dataset) -> SummaryVector:
    """Summarize a validated dataset into its fixed-length vector.

    Deterministic for a fixed dataset: same rows, same summary.
    """
    if dataset.row_count == 0 or not dataset.rows:
        raise EmptyDataset(f"dataset {dataset.dataset_id} has no rows")

    values: list[float] = []
    for idx, col in enumerate(dataset.columns):
        cells = [row[idx] for row in dataset.rows]
        if col.name == "label":
            counts = {c: 0 for c in dataset.label_classes}
            for v in cells:
                counts[v] += 1
            n = len(cells)
            values.extend(counts[c] / n for c in dataset.label_classes)
        elif col.kind == "numeric":
            values.extend(_numeric_block(cells))
        elif col.kind == "categorical":
            if col.categories is None:
                raise NonNumericFeature(f"column {col.name!r} lacks declared categories")
            # categorical features do not enter the summary
        else:
            raise NonNumericFeature(f"column {col.name!r} has unsupported kind {col.kind!r}")

    dims = summary_dims(dataset.columns, dataset.label_classes)
    return SummaryVector(values=tuple(values), dims=dims, schema_hash=dataset.schema_hash)
