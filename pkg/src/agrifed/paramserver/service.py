"""The training orchestrator.

Jobs are validated at submission, persisted queued, and driven by a small
worker pool (FIFO admission, bounded concurrency). Each round dispatches
local training to every collaborator's compute slot, enforces the round
barrier, and aggregates with sample-weighted averaging. The trained model
document (weights + status) is the commit point; the job flips to completed
afterwards. Any collaborator failure below quorum fails the job.
"""

from __future__ import annotations

import queue
import threading
import time
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from agrifed.errors import (
    AgrifedError,
    CollaboratorFailure,
    EmptyCollaboratorList,
    Forbidden,
    InvalidDimensions,
    ModelNotTrained,
    NotFound,
    RoundMismatch,
    SchemaMismatch,
    UnknownCollaborator,
    UnknownDataset,
)
from agrifed.fl.aggregate import fedavg
from agrifed.fl.data import feature_dim
from agrifed.fl.models import MODEL_TYPES, init_global, weights_from_json, weights_to_json
from agrifed.fl.training import LocalUpdate
from agrifed.node.capability import mint_capability
from agrifed.node.service import ComputeRequest
from agrifed.paramserver.jobs import TrainingJob, assert_transition
from agrifed.risk.report import MIN_Q0, RiskReport, build_report
from agrifed.risk.losses import LossSample
from agrifed.store.catalog import SYSTEM, Catalog
from agrifed.store.documents import ModelRecord


@dataclass
class ParamServerConfig:
    capability_secret: str
    max_concurrent_jobs: int = 2
    round_timeout_seconds: float = 120.0
    quorum: float = 1.0  # fraction of collaborators whose updates a round requires
    capability_ttl_seconds: float = 60.0


class ParamServer:
    def __init__(self, catalog: Catalog, node_client, config: ParamServerConfig):
        self.catalog = catalog
        self.node = node_client
        self.config = config
        self._queue: queue.Queue = queue.Queue()
        self._workers: list[threading.Thread] = []
        self._stopping = False

    # -- lifecycle -------------------------------------------------------------

    def start(self) -> None:
        self.recover()
        for i in range(self.config.max_concurrent_jobs):
            t = threading.Thread(target=self._worker_loop, daemon=True, name=f"job-worker-{i}")
            t.start()
            self._workers.append(t)

    def stop(self) -> None:
        self._stopping = True
        for _ in self._workers:
            self._queue.put(None)
        for t in self._workers:
            t.join(timeout=10)
        self._workers.clear()

    def recover(self) -> None:
        """Jobs found running at startup were interrupted; fail them."""
        for doc in self.catalog.list_jobs():
            if doc.get("status") == "running":
                job = TrainingJob.from_doc(doc)
                self._fail(job, "interrupted")

    # -- submission ---------------------------------------------------------------

    def submit(self, job: TrainingJob) -> str:
        """Validate, persist queued, and hand to the background workers."""
        self._validate(job)
        job.status = "queued"
        job.created_at = time.time()
        self.catalog.put_job(job.to_doc())
        self._queue.put(job.job_id)
        return job.job_id

    def _validate(self, job: TrainingJob) -> None:
        if job.model_type not in MODEL_TYPES:
            raise InvalidDimensions(f"unknown model type {job.model_type!r}")
        if job.visibility not in ("public", "private"):
            raise InvalidDimensions(f"visibility must be public or private")
        if not job.collaborators:
            raise EmptyCollaboratorList("a job needs at least one participant")

        try:
            reference = self.catalog.get_dataset(SYSTEM, job.reference_dataset_id)
        except NotFound:
            raise UnknownDataset(f"no such dataset {job.reference_dataset_id}")
        if reference.owner != job.owner:
            raise Forbidden("initiator does not own the reference dataset")

        seen = set()
        for username, dataset_id in job.collaborators:
            if username in seen:
                raise UnknownCollaborator(f"collaborator {username!r} listed twice")
            seen.add(username)
            if self.catalog.get_user(username) is None:
                raise UnknownCollaborator(f"no such user {username!r}")
            try:
                ds = self.catalog.get_dataset(SYSTEM, dataset_id)
            except NotFound:
                raise UnknownCollaborator(f"collaborator dataset {dataset_id} not found")
            if ds.owner != username:
                raise UnknownCollaborator(
                    f"dataset {dataset_id} does not belong to {username!r}"
                )
            if ds.schema_hash != reference.schema_hash:
                raise SchemaMismatch(
                    f"collaborator {username!r} dataset schema differs from the reference"
                )

    # -- status ------------------------------------------------------------------

    def status(self, caller: str, job_id: str) -> dict:
        return TrainingJob.from_doc(self.catalog.get_job(caller, job_id)).status_view()

    def result(self, caller: str, job_id: str) -> dict:
        job = TrainingJob.from_doc(self.catalog.get_job(caller, job_id))
        if job.status != "completed" or job.model_id is None:
            raise ModelNotTrained(f"job {job_id} has not produced a model")
        record = self.catalog.get_model(SYSTEM, job.model_id)
        return {"model_id": record.model_id, "training_status": record.training_status}

    # -- execution ------------------------------------------------------------------

    def _worker_loop(self) -> None:
        while True:
            job_id = self._queue.get()
            if job_id is None:
                return
            try:
                self.run(job_id)
            except Exception:
                pass  # failure already recorded on the job document

    def _set_status(self, job: TrainingJob, status: str) -> None:
        assert_transition(job.status, status)
        job.status = status
        self.catalog.put_job(job.to_doc())

    def _fail(self, job: TrainingJob, reason: str) -> None:
        if job.status in ("queued",):  # interrupted before any round ran
            assert_transition(job.status, "running")
            job.status = "running"
        assert_transition(job.status, "failed")
        job.status = "failed"
        job.failure_reason = reason
        job.completed_at = time.time()
        if job.model_id is not None:
            try:
                self.catalog.delete_model(SYSTEM, job.model_id)
            except NotFound:
                pass
            job.model_id = None
        self.catalog.put_job(job.to_doc())

    def run(self, job_id: str) -> ModelRecord:
        """Drive a queued job to a terminal state; returns the model record."""
        job = TrainingJob.from_doc(self.catalog.get_job(SYSTEM, job_id))
        self._set_status(job, "running")
        try:
            record = self._train(job)
        except AgrifedError as err:
            self._fail(job, f"{err.code}: {err.message}")
            raise
        except Exception as exc:
            self._fail(job, f"InternalError: {exc}")
            raise

        job.completed_at = time.time()
        assert_transition(job.status, "completed")
        job.status = "completed"
        self.catalog.put_job(job.to_doc())

        try:
            self.analyze(record.model_id)
        except AgrifedError:
            pass  # analysis failures leave the trained model standing
        return record

    def _train(self, job: TrainingJob) -> ModelRecord:
        reference = self.catalog.get_dataset(SYSTEM, job.reference_dataset_id)
        fdim = feature_dim(reference.feature_columns)
        num_classes = len(reference.label_classes)
        hp = job.hyperparams

        record = ModelRecord(
            model_id=uuid.uuid4().hex,
            name=job.name,
            model_type=job.model_type,
            metadata={
                "schema_hash": reference.schema_hash,
                "feature_columns": [c.to_doc() for c in reference.feature_columns],
                "job_id": job.job_id,
                "collaborator_datasets": [[u, d] for u, d in job.collaborators],
                "train_sample_count": None,
            },
            owner=job.owner,
            visibility=job.visibility,
            num_classes=num_classes,
            class_names=list(reference.label_classes),
            training_status="training",
            readme=job.readme,
            weights=None,
            created_at=time.time(),
            collaborators=[u for u, _ in job.collaborators],
        )
        self.catalog.put_model(record)
        job.model_id = record.model_id
        self.catalog.put_job(job.to_doc())

        global_weights = init_global(
            job.model_type, fdim, num_classes, hidden_dim=job.hidden_dim, seed=hp.seed
        )

        participants = sorted(job.collaborators)
        total_samples = 0
        for round_index in range(1, hp.rounds + 1):
            updates = self._dispatch_round(job, participants, global_weights, round_index)
            for u in updates:
                if u.round != round_index:
                    raise RoundMismatch(
                        f"update for round {u.round} arrived in round {round_index}"
                    )
            updates.sort(key=lambda u: u.farmer)
            global_weights = fedavg(updates)
            total_samples = sum(u.sample_count for u in updates)

        # single-document commit point: weights and trained status together
        record.weights = weights_to_json(global_weights)
        record.training_status = "trained"
        record.metadata["train_sample_count"] = total_samples
        self.catalog.put_model(record)
        return record

    def _dispatch_round(
        self,
        job: TrainingJob,
        participants: list[tuple[str, str]],
        global_weights,
        round_index: int,
    ) -> list[LocalUpdate]:
        deadline = time.time() + self.config.round_timeout_seconds
        payload_template = {
            "start": weights_to_json(global_weights),
            "hyperparams": job.hyperparams.to_json(),
            "round": round_index,
        }

        def one(entry):
            username, dataset_id = entry
            token = mint_capability(
                self.config.capability_secret,
                username,
                dataset_id,
                "local_train",
                ttl=self.config.capability_ttl_seconds,
            )
            request = ComputeRequest(
                request_id=uuid.uuid4().hex,
                kind="local_train",
                dataset_id=dataset_id,
                authorization=token,
                payload=dict(payload_template),
            )
            remaining = max(1.0, deadline - time.time())
            result = self.node.compute(request, timeout=remaining)
            u = result.body["update"]
            return LocalUpdate(
                weights=weights_from_json(u["weights"]),
                sample_count=u["sample_count"],
                train_loss=u["train_loss"],
                farmer=u["farmer"],
                round=u["round"],
            )

        updates: list[LocalUpdate] = []
        failures: list[str] = []
        with ThreadPoolExecutor(max_workers=max(1, len(participants))) as pool:
            futures = {pool.submit(one, entry): entry for entry in participants}
            for future, entry in futures.items():
                try:
                    updates.append(future.result(timeout=self.config.round_timeout_seconds))
                except Exception as exc:
                    failures.append(f"{entry[0]}: {exc}")

        needed = max(1, int(self.config.quorum * len(participants) + 0.999999))
        if len(updates) < needed:
            raise CollaboratorFailure(
                f"round {round_index} below quorum ({len(updates)}/{len(participants)}): "
                + "; ".join(failures)
            )
        return updates

    # -- risk analysis -----------------------------------------------------------------

    def analyze(self, model_id: str) -> RiskReport:
        """Pool loss samples from every collaborator slot and persist the report."""
        record = self.catalog.get_model(SYSTEM, model_id)
        if record.training_status != "trained" or record.weights is None:
            raise ModelNotTrained(f"model {model_id} is not trained")

        samples: list[LossSample] = []
        for username, dataset_id in sorted(record.metadata.get("collaborator_datasets", [])):
            token = mint_capability(
                self.config.capability_secret,
                username,
                dataset_id,
                "loss_eval",
                ttl=self.config.capability_ttl_seconds,
            )
            request = ComputeRequest(
                request_id=uuid.uuid4().hex,
                kind="loss_eval",
                dataset_id=dataset_id,
                authorization=token,
                payload={"weights": record.weights},
            )
            try:
                result = self.node.compute(request, timeout=self.config.round_timeout_seconds)
            except UnknownDataset:
                continue  # deleted since training; its rows are gone for good
            samples.extend(
                LossSample(loss=s["loss"], member=s["member"], farmer=s["farmer"])
                for s in result.body["samples"]
            )

        train_count = record.metadata.get("train_sample_count") or 0
        q0 = max(float(train_count), MIN_Q0)
        log = self.catalog.list_log_entries(SYSTEM, model_id)
        report = build_report(model_id, samples, log, q0=q0)
        self.catalog.put_report(model_id, report.to_json())
        return report
