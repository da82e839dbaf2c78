"""Document types persisted by the platform, with JSON (de)serialization.

Model weights are kept in their serialized dict form here; compute layers
deserialize on demand. That keeps persistence free of numpy state.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field


def schema_digest(column_names: list[str], kinds: list[str], label_classes: list[str]) -> str:
    """Digest over (ordered column names, kinds, label classes).

    Datasets with equal digests are eligible for cross-owner similarity and
    joint training; feature-category sets intentionally do not participate.
    """
    payload = json.dumps(
        {"names": list(column_names), "kinds": list(kinds), "labels": list(label_classes)},
        separators=(",", ":"),
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


@dataclass
class Column:
    name: str
    kind: str  # "numeric" | "categorical"
    categories: list[str] | None = None

    def to_doc(self) -> dict:
        doc = {"name": self.name, "kind": self.kind}
        if self.categories is not None:
            doc["categories"] = list(self.categories)
        return doc

    @classmethod
    def from_doc(cls, doc: dict) -> "Column":
        return cls(name=doc["name"], kind=doc["kind"], categories=doc.get("categories"))


@dataclass
class Dataset:
    """Owner-scoped tabular farm data. ``rows`` holds the original cell text
    so export reproduces every value exactly."""

    dataset_id: str
    owner: str
    name: str
    columns: list[Column]  # full CSV column order, includes the label column
    label_classes: list[str]
    row_count: int
    schema_hash: str
    rows: list[list[str]]
    created_at: float

    @property
    def feature_columns(self) -> list[Column]:
        return [c for c in self.columns if c.name != "label"]

    @property
    def label_index(self) -> int:
        return next(i for i, c in enumerate(self.columns) if c.name == "label")

    def to_doc(self) -> dict:
        return {
            "dataset_id": self.dataset_id,
            "owner": self.owner,
            "name": self.name,
            "columns": [c.to_doc() for c in self.columns],
            "label_classes": list(self.label_classes),
            "row_count": self.row_count,
            "schema_hash": self.schema_hash,
            "rows": [list(r) for r in self.rows],
            "created_at": self.created_at,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "Dataset":
        return cls(
            dataset_id=doc["dataset_id"],
            owner=doc["owner"],
            name=doc["name"],
            columns=[Column.from_doc(c) for c in doc["columns"]],
            label_classes=list(doc["label_classes"]),
            row_count=doc["row_count"],
            schema_hash=doc["schema_hash"],
            rows=[list(r) for r in doc["rows"]],
            created_at=doc["created_at"],
        )

    def meta_view(self) -> dict:
        """Everything except row payloads; safe to list to the owner."""
        return {
            "dataset_id": self.dataset_id,
            "owner": self.owner,
            "name": self.name,
            "columns": [c.to_doc() for c in self.columns],
            "label_classes": list(self.label_classes),
            "row_count": self.row_count,
            "schema_hash": self.schema_hash,
            "created_at": self.created_at,
        }


@dataclass
class ModelRecord:
    model_id: str
    name: str
    model_type: str
    metadata: dict  # feature schema, schema_hash, train_sample_count, job_id
    owner: str
    visibility: str  # "public" | "private"
    num_classes: int
    class_names: list[str]
    training_status: str  # "training" | "trained" | "failed"
    readme: str
    weights: dict | None  # serialized ModelWeights; present iff trained
    created_at: float
    collaborators: list[str] = field(default_factory=list)
    allowed_users: list[str] = field(default_factory=list)

    def to_doc(self) -> dict:
        return {
            "model_id": self.model_id,
            "name": self.name,
            "model_type": self.model_type,
            "metadata": self.metadata,
            "owner": self.owner,
            "visibility": self.visibility,
            "num_classes": self.num_classes,
            "class_names": list(self.class_names),
            "training_status": self.training_status,
            "readme": self.readme,
            "weights": self.weights,
            "created_at": self.created_at,
            "collaborators": list(self.collaborators),
            "allowed_users": list(self.allowed_users),
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "ModelRecord":
        return cls(
            model_id=doc["model_id"],
            name=doc["name"],
            model_type=doc["model_type"],
            metadata=doc["metadata"],
            owner=doc["owner"],
            visibility=doc["visibility"],
            num_classes=doc["num_classes"],
            class_names=list(doc["class_names"]),
            training_status=doc["training_status"],
            readme=doc["readme"],
            weights=doc["weights"],
            created_at=doc["created_at"],
            collaborators=list(doc.get("collaborators", [])),
            allowed_users=list(doc.get("allowed_users", [])),
        )

    def visible_to(self, username: str) -> bool:
        if self.visibility == "public":
            return True
        return (
            username == self.owner
            or username in self.collaborators
            or username in self.allowed_users
        )


@dataclass
class ChatMessage:
    message_id: str
    sender: str
    recipient: str
    body: str
    sent_at: float

    def to_doc(self) -> dict:
        return {
            "message_id": self.message_id,
            "sender": self.sender,
            "recipient": self.recipient,
            "body": self.body,
            "sent_at": self.sent_at,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "ChatMessage":
        return cls(**doc)

    def sort_key(self) -> tuple:
        return (self.sent_at, self.message_id)


@dataclass
class InferenceLogEntry:
    entry_id: str
    model_id: str
    user: str
    timestamp: float
    query_count: int
    row_digests: list[str]

    def to_doc(self) -> dict:
        return {
            "entry_id": self.entry_id,
            "model_id": self.model_id,
            "user": self.user,
            "timestamp": self.timestamp,
            "query_count": self.query_count,
            "row_digests": list(self.row_digests),
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "InferenceLogEntry":
        return cls(**doc)


@dataclass
class UserAccount:
    username: str
    credential_hash: str
    created_at: float
    contacts: list[str] = field(default_factory=list)

    def to_doc(self) -> dict:
        return {
            "username": self.username,
            "credential_hash": self.credential_hash,
            "created_at": self.created_at,
            "contacts": list(self.contacts),
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "UserAccount":
        return cls(**doc)
