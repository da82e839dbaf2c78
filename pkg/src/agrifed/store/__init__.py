"""Persistence: document store, typed catalog, and CSV ingestion."""

from agrifed.store.db import DocumentStore
from agrifed.store.documents import (
    ChatMessage,
    Column,
    Dataset,
    InferenceLogEntry,
    ModelRecord,
    UserAccount,
    schema_digest,
)
from agrifed.store.csvio import export_csv, ingest_csv
from agrifed.store.catalog import SYSTEM, Catalog

__all__ = [
    "Catalog",
    "ChatMessage",
    "Column",
    "Dataset",
    "DocumentStore",
    "InferenceLogEntry",
    "ModelRecord",
    "SYSTEM",
    "UserAccount",
    "export_csv",
    "ingest_csv",
    "schema_digest",
]
