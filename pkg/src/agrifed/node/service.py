"""Request-scoped compute on behalf of dataset owners.

All dataset rows live in request-scoped memory only: a registry records
which dataset a request is holding while in flight and drops the entry on
every exit path, so an audit between requests always reads empty. Results
carry sketches, weight updates, or loss samples, never rows or labels.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field

from agrifed.errors import (
    DuplicateRequest,
    NotFound,
    Unauthorized,
    UnknownDataset,
    UpstreamComputationError,
)
from agrifed.fl.models import weights_from_json, weights_to_json
from agrifed.fl.training import Hyperparams, local_train
from agrifed.node.capability import verify_capability
from agrifed.privacy.ldp import perturb, sketch_to_json
from agrifed.privacy.summary import compute_summary
from agrifed.risk.losses import collect_losses
from agrifed.store.catalog import SYSTEM, Catalog

KINDS = ("sketch", "local_train", "loss_eval")


@dataclass
class ComputeRequest:
    request_id: str
    kind: str
    dataset_id: str
    authorization: str
    payload: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "request_id": self.request_id,
            "kind": self.kind,
            "dataset_id": self.dataset_id,
            "authorization": self.authorization,
            "payload": self.payload,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "ComputeRequest":
        return cls(
            request_id=doc["request_id"],
            kind=doc["kind"],
            dataset_id=doc["dataset_id"],
            authorization=doc["authorization"],
            payload=doc.get("payload", {}),
        )


@dataclass
class ComputeResult:
    request_id: str
    kind: str
    body: dict
    duration_ms: float

    def to_json(self) -> dict:
        return {
            "request_id": self.request_id,
            "kind": self.kind,
            "body": self.body,
            "duration_ms": self.duration_ms,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "ComputeResult":
        return cls(
            request_id=doc["request_id"],
            kind=doc["kind"],
            body=doc["body"],
            duration_ms=doc["duration_ms"],
        )


class BufferRegistry:
    """Tracks which dataset each in-flight request holds."""

    def __init__(self):
        self._lock = threading.Lock()
        self._inflight: dict[str, str] = {}
        self._seen: set[str] = set()

    def register(self, request_id: str, dataset_id: str) -> None:
        with self._lock:
            if request_id in self._seen:
                raise DuplicateRequest(f"request id {request_id} was already used")
            self._seen.add(request_id)
            self._inflight[request_id] = dataset_id

    def release(self, request_id: str) -> None:
        with self._lock:
            self._inflight.pop(request_id, None)

    def forget(self, request_id: str) -> None:
        """Release and un-consume an id (auth-rejected requests never ran)."""
        with self._lock:
            self._inflight.pop(request_id, None)
            self._seen.discard(request_id)

    def retained_datasets(self) -> list[str]:
        with self._lock:
            return sorted(set(self._inflight.values()))

    def snapshot(self) -> dict[str, str]:
        with self._lock:
            return dict(self._inflight)


class FarmerNode:
    def __init__(self, catalog: Catalog, secret: str, clock=time.time):
        self.catalog = catalog
        self.secret = secret
        self.clock = clock
        self.registry = BufferRegistry()

    def handle(self, request: ComputeRequest) -> ComputeResult:
        """Authorize, compute, and drop all request state.

        The capability must be valid for (dataset, kind) and its subject
        must be the dataset owner; nothing is computed otherwise.
        """
        if request.kind not in KINDS:
            raise UpstreamComputationError(
                f"unknown compute kind {request.kind!r}", request.request_id
            )
        claims = verify_capability(
            self.secret, request.authorization, request.dataset_id, request.kind
        )

        started = self.clock()
        self.registry.register(request.request_id, request.dataset_id)
        try:
            try:
                dataset = self.catalog.get_dataset(SYSTEM, request.dataset_id)
            except NotFound:
                raise UnknownDataset(f"no such dataset {request.dataset_id}")
            if dataset.owner != claims["sub"]:
                raise Unauthorized("capability subject is not the dataset owner")

            if request.kind == "sketch":
                body = self._sketch(dataset, request.payload)
            elif request.kind == "local_train":
                body = self._local_train(dataset, request.payload)
            else:
                body = self._loss_eval(dataset, request.payload)
        except (Unauthorized, UnknownDataset) as exc:
            # nothing ran; the id stays available to its rightful sender
            self.registry.forget(request.request_id)
            raise exc
        except Exception as exc:
            code = getattr(exc, "code", type(exc).__name__)
            raise UpstreamComputationError(f"{code}: {exc}", request.request_id)
        finally:
            self.registry.release(request.request_id)

        return ComputeResult(
            request_id=request.request_id,
            kind=request.kind,
            body=body,
            duration_ms=(self.clock() - started) * 1000.0,
        )

    def audit_state(self) -> list[str]:
        """Dataset ids still registered; empty whenever no request is in flight."""
        return self.registry.retained_datasets()

    # -- kind handlers; results never contain rows or label values -------------

    def _sketch(self, dataset, payload: dict) -> dict:
        summary = compute_summary(dataset)
        sketch = perturb(
            summary, float(payload["epsilon"]), rng_seed=payload.get("rng_seed")
        )
        return {"sketch": sketch_to_json(sketch), "owner": dataset.owner}

    def _local_train(self, dataset, payload: dict) -> dict:
        start = weights_from_json(payload["start"])
        hp = Hyperparams.from_json(payload["hyperparams"])
        round_index = int(payload.get("round", 1))
        update = local_train(
            start,
            dataset,
            hp,
            epoch_offset=(round_index - 1) * hp.local_epochs,
            farmer=dataset.owner,
            round_index=round_index,
        )
        return {
            "update": {
                "weights": weights_to_json(update.weights),
                "sample_count": update.sample_count,
                "train_loss": update.train_loss,
                "farmer": update.farmer,
                "round": update.round,
            }
        }

    def _loss_eval(self, dataset, payload: dict) -> dict:
        model = weights_from_json(payload["weights"])
        samples = collect_losses(model, dataset, farmer=dataset.owner)
        return {
            "samples": [
                {"loss": s.loss, "member": s.member, "farmer": s.farmer} for s in samples
            ]
        }
