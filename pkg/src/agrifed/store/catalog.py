"""Typed, access-controlled persistence surface.

Every read path is covered by an ownership or visibility rule: dataset rows
are owner-only, models follow public/private visibility, conversations are
participant-only, inference logs are model-owner-only. Internal services
pass the SYSTEM caller, which bypasses the checks (they run inside the
trust boundary the checks protect).
"""

from __future__ import annotations

import threading

from agrifed.errors import Conflict, Forbidden, NotFound
from agrifed.store.db import DocumentStore
from agrifed.store.documents import (
    ChatMessage,
    Dataset,
    InferenceLogEntry,
    ModelRecord,
    UserAccount,
)

SYSTEM = "__system__"

USERS = "users"
DATASETS = "datasets"
MODELS = "models"
JOBS = "jobs"
MESSAGES = "messages"
LOGS = "logs"
REPORTS = "reports"
PROPOSALS = "proposals"


class Catalog:
    def __init__(self, store: DocumentStore):
        self.store = store
        self._lock = threading.RLock()

    # -- users ---------------------------------------------------------------

    def create_user(self, account: UserAccount) -> None:
        try:
            self.store.create(USERS, account.username, account.to_doc())
        except FileExistsError:
            raise Conflict(f"username {account.username!r} already exists")

    def get_user(self, username: str) -> UserAccount | None:
        doc = self.store.get(USERS, username)
        return UserAccount.from_doc(doc) if doc else None

    def require_user(self, username: str) -> UserAccount:
        user = self.get_user(username)
        if user is None:
            raise NotFound(f"no such user {username!r}")
        return user

    def list_usernames(self) -> list[str]:
        return self.store.list_ids(USERS)

    # -- datasets ------------------------------------------------------------

    def put_dataset(self, dataset: Dataset) -> None:
        self.store.put(DATASETS, dataset.dataset_id, dataset.to_doc())

    def get_dataset(self, caller: str, dataset_id: str) -> Dataset:
        """Full dataset including rows; owner-only (rows are private)."""
        doc = self.store.get(DATASETS, dataset_id)
        if doc is None:
            raise NotFound(f"no such dataset {dataset_id}")
        if caller != SYSTEM and caller != doc["owner"]:
            raise Forbidden("only the owner may read a dataset")
        return Dataset.from_doc(doc)

    def list_datasets(self, caller: str) -> list[Dataset]:
        """The caller's own datasets (meta use only; rows included)."""
        out = []
        for doc in self.store.scan(DATASETS):
            if caller == SYSTEM or doc["owner"] == caller:
                out.append(Dataset.from_doc(doc))
        out.sort(key=lambda d: (d.created_at, d.dataset_id))
        return out

    def delete_dataset(self, caller: str, dataset_id: str) -> None:
        doc = self.store.get(DATASETS, dataset_id)
        if doc is None:
            raise NotFound(f"no such dataset {dataset_id}")
        if caller != SYSTEM and caller != doc["owner"]:
            raise Forbidden("only the owner may delete a dataset")
        self.store.delete(DATASETS, dataset_id)

    def datasets_with_schema(self, schema_hash: str) -> list[Dataset]:
        """Internal: all datasets sharing a schema digest (similarity scan)."""
        return [
            Dataset.from_doc(doc)
            for doc in self.store.scan(DATASETS)
            if doc["schema_hash"] == schema_hash
        ]

    # -- models ----------------------------------------------------------------

    def put_model(self, record: ModelRecord) -> None:
        self.store.put(MODELS, record.model_id, record.to_doc())

    def get_model(self, caller: str, model_id: str) -> ModelRecord:
        """Visibility-checked load. Invisible private models read as absent,
        so existence cannot be probed."""
        doc = self.store.get(MODELS, model_id)
        if doc is None:
            raise NotFound(f"no such model {model_id}")
        record = ModelRecord.from_doc(doc)
        if caller != SYSTEM and not record.visible_to(caller):
            raise NotFound(f"no such model {model_id}")
        return record

    def list_models(self, caller: str) -> list[ModelRecord]:
        out = []
        for doc in self.store.scan(MODELS):
            record = ModelRecord.from_doc(doc)
            if caller == SYSTEM or record.visible_to(caller):
                out.append(record)
        out.sort(key=lambda m: (m.created_at, m.model_id))
        return out

    def delete_model(self, caller: str, model_id: str) -> None:
        doc = self.store.get(MODELS, model_id)
        if doc is None:
            raise NotFound(f"no such model {model_id}")
        if caller != SYSTEM and caller != doc["owner"]:
            raise Forbidden("only the owner may delete a model")
        self.store.delete(MODELS, model_id)
        self.store.delete(REPORTS, model_id)

    # -- jobs (documents owned by the training orchestrator) ---------------------

    def put_job(self, job_doc: dict) -> None:
        self.store.put(JOBS, job_doc["job_id"], job_doc)

    def get_job(self, caller: str, job_id: str) -> dict:
        doc = self.store.get(JOBS, job_id)
        if doc is None:
            raise NotFound(f"no such job {job_id}")
        participants = {c[0] for c in doc.get("collaborators", [])}
        if caller != SYSTEM and caller != doc.get("owner") and caller not in participants:
            raise Forbidden("job status is limited to its participants")
        return doc

    def list_jobs(self) -> list[dict]:
        return self.store.scan(JOBS)

    # -- chat ----------------------------------------------------------------------

    def put_message(self, message: ChatMessage) -> None:
        self.store.put(MESSAGES, message.message_id, message.to_doc())

    def conversation(self, caller: str, user_a: str, user_b: str) -> list[ChatMessage]:
        """Messages between two users, oldest first; participants only."""
        if caller != SYSTEM and caller not in (user_a, user_b):
            raise Forbidden("conversations are visible to participants only")
        pair = {user_a, user_b}
        msgs = [
            ChatMessage.from_doc(doc)
            for doc in self.store.scan(MESSAGES)
            if {doc["sender"], doc["recipient"]} == pair
        ]
        msgs.sort(key=lambda m: m.sort_key())
        return msgs

    # -- inference logs ----------------------------------------------------------------

    def append_log(self, entry: InferenceLogEntry) -> None:
        self.store.put(LOGS, entry.entry_id, entry.to_doc())

    def list_log_entries(self, caller: str, model_id: str) -> list[InferenceLogEntry]:
        """A model's inference log; owner-only."""
        doc = self.store.get(MODELS, model_id)
        if doc is None:
            raise NotFound(f"no such model {model_id}")
        if caller != SYSTEM and caller != doc["owner"]:
            raise Forbidden("inference logs are visible to the model owner only")
        entries = [
            InferenceLogEntry.from_doc(e)
            for e in self.store.scan(LOGS)
            if e["model_id"] == model_id
        ]
        entries.sort(key=lambda e: (e.timestamp, e.entry_id))
        return entries

    # -- risk reports ---------------------------------------------------------------------

    def put_report(self, model_id: str, report_doc: dict) -> None:
        self.store.put(REPORTS, model_id, report_doc)

    def get_report(self, model_id: str) -> dict | None:
        return self.store.get(REPORTS, model_id)

    # -- training proposals (consent gate, keyed by the eventual job id) ---------------------

    def put_proposal(self, doc: dict) -> None:
        self.store.put(PROPOSALS, doc["proposal_id"], doc)

    def get_proposal(self, proposal_id: str) -> dict | None:
        return self.store.get(PROPOSALS, proposal_id)

    def update_proposal(self, proposal_id: str, mutate) -> dict:
        """Read-modify-write under the catalog lock."""
        with self._lock:
            doc = self.store.get(PROPOSALS, proposal_id)
            if doc is None:
                raise NotFound(f"no such training proposal {proposal_id}")
            mutate(doc)
            self.store.put(PROPOSALS, proposal_id, doc)
            return doc
