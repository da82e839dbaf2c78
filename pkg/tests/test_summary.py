import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from agrifed.errors import EmptyDataset, NonNumericFeature
from agrifed.privacy.summary import compute_summary, summary_dims
from agrifed.store.documents import Column

from conftest import build_dataset


def oracle_summary(dataset):
    """Literal per-column formula implementation, no numpy."""
    out = []
    for idx, col in enumerate(dataset.columns):
        cells = [row[idx] for row in dataset.rows]
        if col.name == "label":
            n = len(cells)
            out.extend(cells.count(c) / n for c in dataset.label_classes)
        elif col.kind == "numeric":
            xs = [float(c) for c in cells]
            lo, hi = min(xs), max(xs)
            if hi == lo:
                out.extend([0.5, 0.0, 0.0, 1.0])
            else:
                mean = sum(xs) / len(xs)
                var = sum((x - mean) ** 2 for x in xs) / len(xs)
                rng = hi - lo
                out.extend([(mean - lo) / rng, math.sqrt(var) / rng, 0.0, 1.0])
    return out


def two_col_dataset(values, labels):
    rows = [[v, y] for v, y in zip(values, labels)]
    cols = [Column("x", "numeric"), Column("label", "categorical")]
    return build_dataset(rows, cols)


def test_constant_column_degenerate_convention():
    ds = two_col_dataset(["7.5", "7.5", "7.5"], ["a", "a", "a"])
    s = compute_summary(ds)
    assert s.values == (0.5, 0.0, 0.0, 1.0, 1.0)


def test_two_row_hand_computed():
    ds = two_col_dataset(["0", "10"], ["a", "b"])
    s = compute_summary(ds)
    assert s.values == pytest.approx((0.5, 0.5, 0.0, 1.0, 0.5, 0.5), abs=1e-12)
    assert s.values == pytest.approx(oracle_summary(ds), abs=1e-12)


def test_identical_datasets_identical_summary():
    a = two_col_dataset(["1", "2", "3"], ["a", "b", "a"])
    b = two_col_dataset(["1", "2", "3"], ["a", "b", "a"])
    assert compute_summary(a) == compute_summary(b)


def test_block_order_follows_column_order():
    # label sits mid-schema; its histogram block must too
    rows = [["1", "a", "5"], ["3", "b", "9"]]
    cols = [Column("x", "numeric"), Column("label", "categorical"), Column("y", "numeric")]
    ds = build_dataset(rows, cols)
    s = compute_summary(ds)
    assert list(s.values) == pytest.approx(oracle_summary(ds), abs=1e-12)
    # x block, then the label histogram, then the y block
    assert s.values[4:6] == (0.5, 0.5)
    assert s.dims == 4 + 2 + 4


def test_categorical_features_do_not_contribute():
    rows = [["1", "x", "a"], ["2", "y", "b"]]
    cols = [
        Column("n", "numeric"),
        Column("c", "categorical", categories=["x", "y"]),
        Column("label", "categorical"),
    ]
    ds = build_dataset(rows, cols)
    s = compute_summary(ds)
    assert s.dims == 4 + 2
    assert s.dims == summary_dims(ds.columns, ds.label_classes)


def test_empty_dataset_rejected():
    ds = two_col_dataset(["1"], ["a"])
    ds.rows = []
    ds.row_count = 0
    with pytest.raises(EmptyDataset):
        compute_summary(ds)


def test_categorical_without_categories_rejected():
    rows = [["x", "a"], ["y", "b"]]
    cols = [Column("c", "categorical", categories=None), Column("label", "categorical")]
    ds = build_dataset(rows, cols)
    with pytest.raises(NonNumericFeature):
        compute_summary(ds)


@settings(max_examples=60, deadline=None)
@given(
    xs=st.lists(
        st.floats(min_value=-1e6, max_value=1e6, allow_nan=False), min_size=1, max_size=30
    ),
    labels=st.lists(st.sampled_from(["a", "b", "c"]), min_size=1, max_size=30),
)
def test_matches_oracle_and_stays_in_unit_interval(xs, labels):
    n = min(len(xs), len(labels))
    ds = two_col_dataset([repr(x) for x in xs[:n]], labels[:n])
    s = compute_summary(ds)
    assert list(s.values) == pytest.approx(oracle_summary(ds), abs=1e-9)
    assert all(0.0 <= v <= 1.0 for v in s.values)
    assert len(s.values) == s.dims
