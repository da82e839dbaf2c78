"""CSV ingestion with schema inference, and cell-exact export.

Upload prerequisites: the payload must be CSV, must start with a header
row of column names, and must contain a column named "label". A column is
numeric only when every non-empty cell parses as a finite number; blanks
inside numeric columns are rejected rather than imputed. Cell text is
stored verbatim so export reproduces every value exactly.
"""

from __future__ import annotations

import csv
import io
import math
import time
import uuid

from agrifed.errors import (
    EmptyFile,
    MissingHeader,
    MissingLabelColumn,
    MissingValue,
    NotCsv,
    PayloadTooLarge,
    RowArityMismatch,
)
from agrifed.store.documents import Column, Dataset, schema_digest

MAX_UPLOAD_BYTES = 50 * 1024 * 1024


def _parses_numeric(cell: str) -> bool:
    try:
        return math.isfinite(float(cell.strip()))
    except ValueError:
        return False


def _validate_header(header: list[str]) -> None:
    if any(name.strip() == "" for name in header):
        raise MissingHeader("header row contains an empty column name")
    if len(set(header)) != len(header):
        raise MissingHeader("header row contains duplicate column names")
    if any(_parses_numeric(name) for name in header):
        raise MissingHeader("first row looks like data, not column names")


def ingest_csv(owner: str, name: str, data: bytes, now: float | None = None) -> Dataset:
    """Parse, validate, and build a Dataset document from CSV bytes."""
    if len(data) > MAX_UPLOAD_BYTES:
        raise PayloadTooLarge(f"payload exceeds {MAX_UPLOAD_BYTES} bytes")
    if b"\x00" in data:
        raise NotCsv("payload is not text")
    try:
        text = data.decode("utf-8-sig")
    except UnicodeDecodeError:
        raise NotCsv("payload is not UTF-8 text")

    try:
        parsed = list(csv.reader(io.StringIO(text, newline="")))
    except csv.Error as exc:
        raise NotCsv(f"CSV parse failure: {exc}")

    parsed = [row for row in parsed if row != []]
    if not parsed:
        raise EmptyFile("no rows at all")

    header = parsed[0]
    _validate_header(header)
    if "label" not in header:
        raise MissingLabelColumn("no column named 'label'")

    rows = parsed[1:]
    if not rows:
        raise EmptyFile("header only, no data rows")

    width = len(header)
    for i, row in enumerate(rows):
        if len(row) != width:
            # file row number: header is row 1
            raise RowArityMismatch(f"row {i + 2} has {len(row)} cells, expected {width}")

    label_idx = header.index("label")
    columns: list[Column] = []
    for j, col_name in enumerate(header):
        cells = [row[j] for row in rows]
        if j == label_idx:
            for i, cell in enumerate(cells):
                if cell.strip() == "":
                    raise MissingValue(f"empty label in row {i + 2}")
            classes = sorted(set(cells))
            columns.append(Column(name=col_name, kind="categorical", categories=classes))
            continue
        non_empty = [c for c in cells if c.strip() != ""]
        if all(_parses_numeric(c) for c in non_empty):
            if len(non_empty) != len(cells):
                first_blank = next(i for i, c in enumerate(cells) if c.strip() == "")
                raise MissingValue(
                    f"numeric column {col_name!r} has an empty cell in row {first_blank + 2}"
                )
            columns.append(Column(name=col_name, kind="numeric"))
        else:
            columns.append(
                Column(name=col_name, kind="categorical", categories=sorted(set(cells)))
            )

    label_classes = columns[label_idx].categories or []
    schema_hash = schema_digest(
        [c.name for c in columns], [c.kind for c in columns], label_classes
    )
    return Dataset(
        dataset_id=uuid.uuid4().hex,
        owner=owner,
        name=name,
        columns=columns,
        label_classes=label_classes,
        row_count=len(rows),
        schema_hash=schema_hash,
        rows=rows,
        created_at=now if now is not None else time.time(),
    )


def export_csv(dataset: Dataset) -> str:
    """Header plus stored rows; every cell rendered exactly as ingested."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow([c.name for c in dataset.columns])
    writer.writerows(dataset.rows)
    return buf.getvalue()
