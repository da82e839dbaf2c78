"""Feature logic behind the public API.

This tier never touches raw rows itself: anything derived from dataset
contents is computed in the owner's compute slot through capability-scoped
requests. Responses are built from the minimal views each feature needs
(similarity answers carry usernames and scores only; model info exposes the
declared field list; weights never leave the repository).
"""

from __future__ import annotations

import time
import uuid

from agrifed.errors import (
    AgrifedError,
    BodyTooLarge,
    Conflict,
    EmptyBody,
    Forbidden,
    InvalidCredentials,
    MissingField,
    ModelNotTrained,
    NonPositiveArgument,
    NotFound,
    ReportUnavailable,
    SchemaMismatch,
    UnknownUser,
)
from agrifed.fl.data import encode_feature_row, row_digest
from agrifed.fl.models import predict, weights_from_json
from agrifed.fl.training import Hyperparams
from agrifed.node.capability import mint_capability
from agrifed.node.service import ComputeRequest
from agrifed.paramserver.jobs import TrainingJob
from agrifed.privacy.ldp import sketch_from_json
from agrifed.privacy.pca import default_k, fit_pca
from agrifed.privacy.similarity import rank_similar
from agrifed.risk.report import MIN_Q0, combine, query_stats
from agrifed.server.config import AppConfig
from agrifed.server.identity import LocalIdentityProvider, SessionManager
from agrifed.store.catalog import Catalog
from agrifed.store.csvio import ingest_csv
from agrifed.store.documents import ChatMessage, Column, InferenceLogEntry

import hashlib


def _derive_seed(base_seed: int | None, owner: str) -> int | None:
    """Distinct per-owner noise streams from one request seed.

    Keyed by owner (not dataset id) so a fixed seed reproduces the same
    ranking even after datasets are re-uploaded under fresh ids.
    """
    if base_seed is None:
        return None
    digest = hashlib.sha256(f"{base_seed}:{owner}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


class AppService:
    def __init__(
        self,
        catalog: Catalog,
        node_client,
        param_client,
        config: AppConfig,
        identity=None,
        sessions: SessionManager | None = None,
    ):
        self.catalog = catalog
        self.node = node_client
        self.param = param_client
        self.config = config
        self.identity = identity or LocalIdentityProvider(catalog)
        self.sessions = sessions or SessionManager(ttl=config.session_ttl_seconds)

    # -- auth ------------------------------------------------------------------

    def register(self, username: str, credential: str) -> dict:
        if self.config.identity_mode != "local":
            raise Forbidden("registration is handled by the external identity provider")
        self.identity.register(username, credential)
        return {"username": username}

    def login(self, username: str, credential: str) -> dict:
        if not self.identity.verify(username, credential):
            raise InvalidCredentials("credential rejected")
        token = self.sessions.mint(username)
        return {
            "token": token.token,
            "subject": token.subject,
            "expires_at": token.expires_at,
        }

    def authenticate(self, token: str | None) -> str:
        return self.sessions.authenticate(token)

    # -- datasets ---------------------------------------------------------------

    def upload_dataset(self, user: str, name: str, payload: bytes) -> dict:
        if not name:
            raise MissingField("dataset name is required", field="name")
        dataset = ingest_csv(user, name, payload)
        self.catalog.put_dataset(dataset)
        return dataset.meta_view()

    def list_datasets(self, user: str) -> list[dict]:
        return [d.meta_view() for d in self.catalog.list_datasets(user)]

    def get_dataset(self, user: str, dataset_id: str) -> dict:
        dataset = self.catalog.get_dataset(user, dataset_id)
        view = dataset.meta_view()
        view["rows"] = [list(r) for r in dataset.rows]
        return view

    def delete_dataset(self, user: str, dataset_id: str) -> dict:
        self.catalog.delete_dataset(user, dataset_id)
        return {"deleted": dataset_id}

    # -- similar farmers -----------------------------------------------------------

    def _sketch_dataset(self, dataset_id: str, owner: str, epsilon: float, seed: int | None):
        token = mint_capability(
            self.config.capability_secret,
            owner,
            dataset_id,
            "sketch",
            ttl=self.config.capability_ttl_seconds,
        )
        request = ComputeRequest(
            request_id=uuid.uuid4().hex,
            kind="sketch",
            dataset_id=dataset_id,
            authorization=token,
            payload={"epsilon": epsilon, "rng_seed": _derive_seed(seed, owner)},
        )
        result = self.node.compute(request)
        return sketch_from_json(result.body["sketch"])

    def find_similar(
        self,
        user: str,
        dataset_id: str,
        epsilon: float | None = None,
        seed: int | None = None,
    ) -> dict:
        """Rank schema-compatible peers by sketch similarity.

        Every owner's data is sketched on their own compute slot; this tier
        sees only the perturbed vectors. The response carries usernames and
        scores, nothing else.
        """
        dataset = self.catalog.get_dataset(user, dataset_id)

        eps = self.config.epsilon_default if epsilon is None else float(epsilon)
        if not (self.config.epsilon_min <= eps <= self.config.epsilon_max):
            raise NonPositiveArgument(
                f"epsilon must lie in [{self.config.epsilon_min}, {self.config.epsilon_max}]",
                field="epsilon",
            )

        latest_per_owner: dict[str, object] = {}
        for candidate in self.catalog.datasets_with_schema(dataset.schema_hash):
            if candidate.owner == user:
                continue
            current = latest_per_owner.get(candidate.owner)
            if current is None or candidate.created_at > current.created_at:
                latest_per_owner[candidate.owner] = candidate

        if not latest_per_owner:
            return {"scores": [], "no_compatible_peers": True}

        initiator_sketch = self._sketch_dataset(dataset.dataset_id, user, eps, seed)
        candidates = []
        for owner in sorted(latest_per_owner):
            ds = latest_per_owner[owner]
            try:
                candidates.append((owner, self._sketch_dataset(ds.dataset_id, owner, eps, seed)))
            except AgrifedError:
                continue  # candidate disappeared mid-scan; similarity is best effort
        if not candidates:
            return {"scores": [], "no_compatible_peers": True}

        sketches = [initiator_sketch] + [s for _, s in candidates]
        k = default_k(initiator_sketch.dims, len(sketches))
        basis = fit_pca(sketches, k)
        ranking = rank_similar(initiator_sketch, candidates, basis)
        return {
            "scores": [{"peer": s.peer, "score": s.score} for s in ranking.scores],
            "no_compatible_peers": False,
        }

    # -- chat ---------------------------------------------------------------------------

    def send_message(self, user: str, peer: str, body: str) -> dict:
        if self.catalog.get_user(peer) is None:
            raise UnknownUser(f"no such user {peer!r}")
        if user == peer:
            raise Conflict("cannot message yourself")
        if not body:
            raise EmptyBody("message body is empty", field="body")
        if len(body) > self.config.chat_body_max_chars:
            raise BodyTooLarge(
                f"body exceeds {self.config.chat_body_max_chars} characters", field="body"
            )
        message = ChatMessage(
            message_id=uuid.uuid4().hex,
            sender=user,
            recipient=peer,
            body=body,
            sent_at=time.time(),
        )
        self.catalog.put_message(message)
        return message.to_doc()

    def fetch_conversation(self, user: str, peer: str, since: str | None = None) -> list[dict]:
        if self.catalog.get_user(peer) is None:
            raise UnknownUser(f"no such user {peer!r}")
        messages = self.catalog.conversation(user, user, peer)
        if since is not None:
            keys = {m.message_id: m.sort_key() for m in messages}
            if since not in keys:
                raise NotFound(f"unknown cursor message {since!r}")
            cutoff = keys[since]
            messages = [m for m in messages if m.sort_key() > cutoff]
        return [m.to_doc() for m in messages]

    # -- training jobs --------------------------------------------------------------------

    def _parse_hyperparams(self, doc: dict | None) -> Hyperparams:
        merged = dict(self.config.default_hyperparams)
        merged.update(doc or {})
        try:
            return Hyperparams.from_json(merged)
        except (TypeError, ValueError) as exc:
            raise MissingField(f"invalid hyperparams: {exc}", field="hyperparams")

    def submit_training(self, user: str, form: dict) -> dict:
        for field_name in ("name", "model_type", "visibility", "reference_dataset_id"):
            if not form.get(field_name):
                raise MissingField(f"{field_name} is required", field=field_name)

        participants: list[tuple[str, str]] = [(user, form["reference_dataset_id"])]
        for entry in form.get("collaborators") or []:
            username = entry.get("username")
            ds_id = entry.get("dataset_id")
            if not username or not ds_id:
                raise MissingField(
                    "collaborators need username and dataset_id", field="collaborators"
                )
            if username == user:
                continue  # the initiator participates via the reference dataset
            participants.append((username, ds_id))

        job = TrainingJob(
            name=form["name"],
            model_type=form["model_type"],
            visibility=form["visibility"],
            reference_dataset_id=form["reference_dataset_id"],
            owner=user,
            collaborators=participants,
            hyperparams=self._parse_hyperparams(form.get("hyperparams")),
            readme=form.get("readme", ""),
            hidden_dim=form.get("hidden_dim"),
        )

        others = [u for u, _ in participants if u != user]
        if self.config.auto_consent or not others:
            job_id = self.param.submit(user, job)
            return {"job_id": job_id, "consent": "not_required"}

        self.catalog.put_proposal(
            {
                "proposal_id": job.job_id,
                "owner": user,
                "job": job.to_doc(),
                "consents": {u: None for u in others},
                "status": "awaiting_consent",
                "created_at": time.time(),
            }
        )
        return {"job_id": job.job_id, "consent": "awaiting", "pending": others}

    def consent(self, user: str, job_id: str, accept: bool) -> dict:
        proposal = self.catalog.get_proposal(job_id)
        if proposal is None or proposal["status"] != "awaiting_consent":
            raise NotFound(f"no pending consent for job {job_id}")
        if user not in proposal["consents"]:
            raise Forbidden("you are not a pending collaborator on this job")

        def mutate(doc):
            doc["consents"][user] = bool(accept)
            if not accept:
                doc["status"] = "rejected"
            elif all(v is True for v in doc["consents"].values()):
                doc["status"] = "ready"

        updated = self.catalog.update_proposal(job_id, mutate)
        if updated["status"] == "ready":
            job = TrainingJob.from_doc(updated["job"])
            self.param.submit(updated["owner"], job)
            self.catalog.update_proposal(job_id, lambda d: d.update(status="submitted"))
            return {"job_id": job_id, "status": "submitted"}
        return {"job_id": job_id, "status": updated["status"]}

    def job_status(self, user: str, job_id: str) -> dict:
        try:
            return self.param.status(user, job_id)
        except NotFound:
            proposal = self.catalog.get_proposal(job_id)
            if proposal is None:
                raise
            participants = {proposal["owner"], *proposal["consents"].keys()}
            if user not in participants:
                raise NotFound(f"no such job {job_id}")
            return {
                "job_id": job_id,
                "status": proposal["status"],
                "consents": proposal["consents"],
            }

    # -- model repository ---------------------------------------------------------------------

    def list_models(self, user: str) -> list[dict]:
        return [
            {
                "model_id": m.model_id,
                "name": m.name,
                "model_type": m.model_type,
                "owner": m.owner,
                "visibility": m.visibility,
                "training_status": m.training_status,
                "created_at": m.created_at,
            }
            for m in self.catalog.list_models(user)
        ]

    def model_info(self, user: str, model_id: str) -> dict:
        record = self.catalog.get_model(user, model_id)
        return {
            "name": record.name,
            "model_type": record.model_type,
            "metadata": {
                "schema_hash": record.metadata.get("schema_hash"),
                "feature_columns": record.metadata.get("feature_columns", []),
            },
            "owner": record.owner,
            "visibility": record.visibility,
            "num_classes": record.num_classes,
            "class_names": list(record.class_names),
            "training_status": record.training_status,
            "readme": record.readme,
        }

    def playground_predict(self, user: str, model_id: str, rows: list) -> dict:
        """Black-box inference; every accepted batch is logged before the
        response leaves, so the risk log never undercounts."""
        record = self.catalog.get_model(user, model_id)
        if record.training_status != "trained" or record.weights is None:
            raise ModelNotTrained(f"model {model_id} is not trained yet")
        if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
            raise MissingField("rows must be a non-empty list of feature rows", field="rows")

        feature_columns = [
            Column.from_doc(c) for c in record.metadata.get("feature_columns", [])
        ]
        encoded = [encode_feature_row(feature_columns, row) for row in rows]  # validate all first
        weights = weights_from_json(record.weights)
        predictions = [predict(weights, x, record.class_names) for x in encoded]

        entry = InferenceLogEntry(
            entry_id=uuid.uuid4().hex,
            model_id=model_id,
            user=user,
            timestamp=time.time(),
            query_count=len(rows),
            row_digests=[row_digest(r) for r in rows],
        )
        self.catalog.append_log(entry)  # log-then-respond

        return {
            "predictions": [
                {"probabilities": list(p.probabilities), "predicted_class": p.predicted_class}
                for p in predictions
            ]
        }

    def _owned_model(self, user: str, model_id: str):
        record = self.catalog.get_model(user, model_id)  # NotFound if invisible
        if record.owner != user:
            raise Forbidden("risk and log views are limited to the model owner")
        return record

    def model_risk(self, user: str, model_id: str) -> dict:
        """Latest persisted attack figures with user terms recomputed from
        the live query log."""
        record = self._owned_model(user, model_id)
        report_doc = self.catalog.get_report(model_id)
        if report_doc is None:
            raise ReportUnavailable(f"risk analysis has not run for model {model_id}")

        q0 = max(float(record.metadata.get("train_sample_count") or 0), MIN_Q0)
        entries = self.catalog.list_log_entries(user, model_id)
        per_user = query_stats(entries, q0)
        overall = combine(report_doc.get("attack_advantage"), per_user)
        plot = sorted(((u.user, u.risk) for u in per_user), key=lambda p: (-p[1], p[0]))
        return {
            "model_id": model_id,
            "attack_auc": report_doc.get("attack_auc"),
            "attack_advantage": report_doc.get("attack_advantage"),
            "per_user": [u.to_json() for u in per_user],
            "overall": overall,
            "plot_points": [[u, r] for u, r in plot],
        }

    def model_logs(self, user: str, model_id: str) -> dict:
        record = self._owned_model(user, model_id)
        entries = self.catalog.list_log_entries(user, model_id)
        q0 = max(float(record.metadata.get("train_sample_count") or 0), MIN_Q0)
        per_user = query_stats(entries, q0)
        return {
            "model_id": model_id,
            "per_user": [u.to_json() for u in per_user],
            "activity": [
                {"user": e.user, "timestamp": e.timestamp, "query_count": e.query_count}
                for e in entries
            ],
        }
