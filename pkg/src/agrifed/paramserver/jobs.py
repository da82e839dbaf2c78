"""Training job documents and their lifecycle state machine."""

from __future__ import annotations

import uuid
from dataclasses import dataclass, field

from agrifed.fl.training import Hyperparams

JOB_STATUSES = ("queued", "running", "completed", "failed")

_LEGAL = {
    "queued": {"running"},
    "running": {"completed", "failed"},
    "completed": set(),
    "failed": set(),
}


def assert_transition(current: str, target: str) -> None:
    if target not in _LEGAL.get(current, set()):
        raise ValueError(f"illegal job transition {current} -> {target}")


@dataclass
class TrainingJob:
    name: str
    model_type: str
    visibility: str
    reference_dataset_id: str
    owner: str
    collaborators: list[tuple[str, str]]  # (username, dataset_id), owner included
    hyperparams: Hyperparams
    readme: str = ""
    hidden_dim: int | None = None
    job_id: str = field(default_factory=lambda: uuid.uuid4().hex)
    status: str = "queued"
    failure_reason: str | None = None
    model_id: str | None = None
    created_at: float = 0.0
    completed_at: float | None = None

    def to_doc(self) -> dict:
        return {
            "job_id": self.job_id,
            "name": self.name,
            "model_type": self.model_type,
            "visibility": self.visibility,
            "reference_dataset_id": self.reference_dataset_id,
            "owner": self.owner,
            "collaborators": [[u, d] for u, d in self.collaborators],
            "hyperparams": self.hyperparams.to_json(),
            "readme": self.readme,
            "hidden_dim": self.hidden_dim,
            "status": self.status,
            "failure_reason": self.failure_reason,
            "model_id": self.model_id,
            "created_at": self.created_at,
            "completed_at": self.completed_at,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "TrainingJob":
        return cls(
            job_id=doc["job_id"],
            name=doc["name"],
            model_type=doc["model_type"],
            visibility=doc["visibility"],
            reference_dataset_id=doc["reference_dataset_id"],
            owner=doc["owner"],
            collaborators=[(u, d) for u, d in doc["collaborators"]],
            hyperparams=Hyperparams.from_json(doc["hyperparams"]),
            readme=doc.get("readme", ""),
            hidden_dim=doc.get("hidden_dim"),
            status=doc["status"],
            failure_reason=doc.get("failure_reason"),
            model_id=doc.get("model_id"),
            created_at=doc.get("created_at", 0.0),
            completed_at=doc.get("completed_at"),
        )

    def status_view(self) -> dict:
        return {
            "job_id": self.job_id,
            "name": self.name,
            "model_type": self.model_type,
            "visibility": self.visibility,
            "reference_dataset_id": self.reference_dataset_id,
            "owner": self.owner,
            "collaborators": [[u, d] for u, d in self.collaborators],
            "status": self.status,
            "failure_reason": self.failure_reason,
            "model_id": self.model_id,
            "created_at": self.created_at,
            "completed_at": self.completed_at,
        }
