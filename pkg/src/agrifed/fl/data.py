"""Dataset-to-matrix encoding and the deterministic train/holdout split.

Numeric columns pass through as floats; categorical feature columns one-hot
encode against their declared categories. The 80/20 split is a pure function
of the dataset id so that training and later loss evaluation agree on which
rows were members without sharing extra state.
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

from agrifed.errors import SchemaMismatch
from agrifed.store.documents import Column, Dataset

TRAIN_FRACTION = 0.8


def feature_dim(feature_columns: list[Column]) -> int:
    dim = 0
    for col in feature_columns:
        if col.kind == "numeric":
            dim += 1
        else:
            dim += len(col.categories or [])
    return dim


def encode_feature_row(feature_columns: list[Column], row: list) -> np.ndarray:
    """Encode one raw feature row (values in feature-column order).

    Numeric cells accept numbers or numeric text; categorical cells must be
    one of the declared categories.
    """
    if len(row) != len(feature_columns):
        raise SchemaMismatch(
            f"expected {len(feature_columns)} feature values, got {len(row)}"
        )
    parts: list[float] = []
    for col, cell in zip(feature_columns, row):
        if col.kind == "numeric":
            try:
                v = float(str(cell).strip())
            except (TypeError, ValueError):
                raise SchemaMismatch(f"column {col.name!r} expects a number, got {cell!r}")
            if not np.isfinite(v):
                raise SchemaMismatch(f"column {col.name!r} value is not finite")
            parts.append(v)
        else:
            cats = col.categories or []
            cell = str(cell)
            if cell not in cats:
                raise SchemaMismatch(f"column {col.name!r} has no category {cell!r}")
            onehot = [0.0] * len(cats)
            onehot[cats.index(cell)] = 1.0
            parts.extend(onehot)
    return np.array(parts, dtype=float)


def design_matrix(dataset: Dataset) -> tuple[np.ndarray, np.ndarray]:
    """(X, y) for the full dataset; y holds label-class indices."""
    feats = dataset.feature_columns
    label_idx = dataset.label_index
    feature_positions = [i for i, c in enumerate(dataset.columns) if c.name != "label"]
    class_index = {c: i for i, c in enumerate(dataset.label_classes)}

    xs, ys = [], []
    for row in dataset.rows:
        raw = [row[i] for i in feature_positions]
        xs.append(encode_feature_row(feats, raw))
        label = row[label_idx]
        if label not in class_index:
            raise SchemaMismatch(f"label {label!r} not in declared classes")
        ys.append(class_index[label])
    return np.array(xs, dtype=float), np.array(ys, dtype=int)


def _split_seed(dataset: Dataset) -> int:
    digest = hashlib.sha256()
    for row in dataset.rows:
        digest.update(json.dumps(row, separators=(",", ":")).encode("utf-8"))
    return int.from_bytes(digest.digest()[:8], "big")


def holdout_split(dataset: Dataset) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic 80/20 partition of row indices: (train, holdout).

    The holdout is never trained on; it supplies non-member losses for
    membership-risk evaluation. The partition is keyed by dataset content,
    so re-uploading identical rows reproduces the same member flags.
    """
    n = dataset.row_count
    perm = np.random.default_rng(_split_seed(dataset)).permutation(n)
    n_train = max(1, int(TRAIN_FRACTION * n))
    return perm[:n_train], perm[n_train:]


def row_digest(row: list) -> str:
    """Digest of a submitted feature row; counts distinct probes in logs."""
    canon = json.dumps([str(v) for v in row], separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()
