import numpy as np
import pytest

from agrifed.simctl.generate import DatasetSpec, generate_csv
from agrifed.store.csvio import ingest_csv
from agrifed.store.documents import Column, Dataset, schema_digest


def build_dataset(
    rows: list[list[str]],
    columns: list[Column],
    label_classes: list[str] | None = None,
    owner: str = "alice",
    dataset_id: str = "ds-test",
) -> Dataset:
    """Hand-assemble a Dataset document without going through CSV."""
    if label_classes is None:
        label_idx = next(i for i, c in enumerate(columns) if c.name == "label")
        label_classes = sorted({r[label_idx] for r in rows})
        columns[label_idx].categories = label_classes
    return Dataset(
        dataset_id=dataset_id,
        owner=owner,
        name="test",
        columns=columns,
        label_classes=label_classes,
        row_count=len(rows),
        schema_hash=schema_digest(
            [c.name for c in columns], [c.kind for c in columns], label_classes
        ),
        rows=rows,
        created_at=0.0,
    )


def blob_dataset(
    n: int = 40,
    feature_dim: int = 2,
    class_sep: float = 3.0,
    seed: int = 0,
    dataset_id: str = "ds-blob",
    owner: str = "alice",
) -> Dataset:
    """Well-separated two-class Gaussian-style dataset, ingested from CSV."""
    spec = DatasetSpec(
        feature_dim=feature_dim,
        classes=2,
        rows_per_farmer=n,
        class_sep=class_sep,
        seed=seed,
    )
    ds = ingest_csv(owner, "blob", generate_csv(spec, group=0, salt=0))
    ds.dataset_id = dataset_id
    return ds


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
