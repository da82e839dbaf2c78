"""End-to-end scenario drives against a running stack.

Scenarios talk to the public HTTP API exclusively, which doubles as a check
that the API suffices for every platform workflow: seed accounts, upload
generated CSVs, rank similar farmers, run a federated job, evaluate the
trained model through the playground, and read the risk report.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import requests

from agrifed.errors import ScenarioFailed, StackUnreachable
from agrifed.simctl.generate import DatasetSpec, generate_csv, generate_eval_rows


@dataclass(frozen=True)
class Scenario:
    name: str
    farmer_count: int = 2
    dataset_spec: DatasetSpec = field(default_factory=DatasetSpec)
    epsilon: float = 1e12
    model_type: str = "logistic_regression"
    hyperparams: dict = field(default_factory=dict)
    groups: int = 1  # farmers split round-robin into this many clusters
    collaborator_count: int | None = None  # None: every ranked peer joins
    eval_rows: int = 200
    poll_interval: float = 0.1
    poll_timeout: float = 120.0

    def __post_init__(self):
        if self.farmer_count < 2:
            raise ValueError("a scenario needs at least two farmers")

    def group_of(self, farmer_index: int) -> int:
        return farmer_index % max(1, self.groups)

    def farmer_name(self, farmer_index: int) -> str:
        return f"{self.name}-farmer{farmer_index}"

    @classmethod
    def from_json(cls, doc: dict) -> "Scenario":
        spec = DatasetSpec(**doc.get("dataset_spec", {}))
        fields = {k: v for k, v in doc.items() if k != "dataset_spec"}
        return cls(dataset_spec=spec, **fields)


class ApiClient:
    """Thin wrapper over the public API; raises typed errors on failures."""

    def __init__(self, base_url: str):
        self.base_url = base_url.rstrip("/")
        self.session = requests.Session()

    def _call(self, method: str, path: str, token: str | None = None, **kw):
        headers = kw.pop("headers", {})
        if token:
            headers["Authorization"] = f"Bearer {token}"
        try:
            resp = self.session.request(
                method, f"{self.base_url}{path}", headers=headers, timeout=60.0, **kw
            )
        except requests.RequestException as exc:
            raise StackUnreachable(f"stack unreachable: {exc}")
        body = resp.json()
        if resp.status_code >= 400:
            raise ScenarioFailed(
                f"{method} {path} -> {resp.status_code} {body.get('code')}: {body.get('message')}"
            )
        return body

    def register(self, username: str, credential: str, tolerate_existing: bool = True):
        try:
            resp = self.session.post(
                f"{self.base_url}/api/v1/auth/register",
                json={"username": username, "credential": credential},
                timeout=30.0,
            )
        except requests.RequestException as exc:
            raise StackUnreachable(f"stack unreachable: {exc}")
        if resp.status_code == 409 and tolerate_existing:
            return
        if resp.status_code >= 400:
            doc = resp.json()
            raise ScenarioFailed(f"register {username}: {doc.get('code')}")

    def login(self, username: str, credential: str) -> str:
        return self._call(
            "POST", "/api/v1/auth/login", json={"username": username, "credential": credential}
        )["token"]

    def upload(self, token: str, name: str, payload: bytes) -> dict:
        return self._call(
            "POST",
            "/api/v1/datasets",
            token=token,
            files={"file": (f"{name}.csv", payload, "text/csv")},
            data={"name": name},
        )

    def similar(self, token: str, dataset_id: str, epsilon: float, seed: int | None) -> dict:
        payload = {"dataset_id": dataset_id, "epsilon": epsilon}
        if seed is not None:
            payload["seed"] = seed
        return self._call("POST", "/api/v1/similar", token=token, json=payload)

    def submit_job(self, token: str, form: dict) -> str:
        return self._call("POST", "/api/v1/jobs", token=token, json=form)["job_id"]

    def job_status(self, token: str, job_id: str) -> dict:
        return self._call("GET", f"/api/v1/jobs/{job_id}", token=token)

    def predict(self, token: str, model_id: str, rows: list) -> list[dict]:
        return self._call(
            "POST", f"/api/v1/models/{model_id}/predict", token=token, json={"rows": rows}
        )["predictions"]

    def risk(self, token: str, model_id: str) -> dict:
        return self._call("GET", f"/api/v1/models/{model_id}/risk", token=token)

    def list_datasets(self, token: str) -> list[dict]:
        return self._call("GET", "/api/v1/datasets", token=token)["datasets"]


def _credential(scenario: Scenario, farmer_index: int) -> str:
    return f"pw-{scenario.name}-{farmer_index}"


def seed(scenario: Scenario, base_url: str) -> dict:
    """Register farmers and upload their generated datasets via the API."""
    client = ApiClient(base_url)
    manifest = {"scenario": scenario.name, "seed": scenario.dataset_spec.seed, "farmers": []}
    for i in range(scenario.farmer_count):
        username = scenario.farmer_name(i)
        client.register(username, _credential(scenario, i))
        token = client.login(username, _credential(scenario, i))
        payload = generate_csv(scenario.dataset_spec, group=scenario.group_of(i), salt=i)
        meta = client.upload(token, f"{scenario.name}-data-{scenario.dataset_spec.seed}", payload)
        manifest["farmers"].append(
            {
                "username": username,
                "group": scenario.group_of(i),
                "dataset_id": meta["dataset_id"],
                "row_count": meta["row_count"],
            }
        )
    return manifest


def _poll_job(client: ApiClient, token: str, job_id: str, scenario: Scenario) -> dict:
    deadline = time.time() + scenario.poll_timeout
    interval = scenario.poll_interval
    while True:
        status = client.job_status(token, job_id)
        if status["status"] in ("completed", "failed"):
            return status
        if time.time() > deadline:
            raise ScenarioFailed(f"job {job_id} still {status['status']} after timeout")
        time.sleep(interval)
        interval = min(interval * 1.5, 2.0)


def run_scenario(scenario: Scenario, base_url: str, manifest: dict | None = None) -> dict:
    """Full drive: similarity -> training -> playground eval -> risk read."""
    client = ApiClient(base_url)
    if manifest is None:
        manifest = seed(scenario, base_url)

    farmers = manifest["farmers"]
    initiator = farmers[0]
    token = client.login(initiator["username"], _credential(scenario, 0))

    ranking = client.similar(
        token, initiator["dataset_id"], scenario.epsilon, scenario.dataset_spec.seed
    )

    by_name = {f["username"]: f for f in farmers}
    ranked_peers = [s["peer"] for s in ranking["scores"]]
    chosen = ranked_peers if scenario.collaborator_count is None else ranked_peers[: scenario.collaborator_count]
    collaborators = [
        {"username": peer, "dataset_id": by_name[peer]["dataset_id"]}
        for peer in chosen
        if peer in by_name
    ]

    form = {
        "name": f"{scenario.name}-model-{scenario.dataset_spec.seed}",
        "model_type": scenario.model_type,
        "visibility": "public",
        "reference_dataset_id": initiator["dataset_id"],
        "readme": f"scenario {scenario.name}",
        "collaborators": collaborators,
        "hyperparams": scenario.hyperparams or None,
    }
    job_id = client.submit_job(token, form)
    job = _poll_job(client, token, job_id, scenario)
    if job["status"] != "completed":
        raise ScenarioFailed(f"job failed: {job.get('failure_reason')}")
    model_id = job["model_id"]

    eval_rows, eval_labels = generate_eval_rows(
        scenario.dataset_spec, group=scenario.group_of(0), salt=0, n=scenario.eval_rows
    )
    predictions = client.predict(token, model_id, eval_rows)
    hits = sum(p["predicted_class"] == y for p, y in zip(predictions, eval_labels))
    accuracy = hits / len(eval_labels)

    risk = client.risk(token, model_id)

    return {
        "scenario": scenario.name,
        "seed": scenario.dataset_spec.seed,
        "epsilon": scenario.epsilon,
        "farmers": farmers,
        "similarity": ranking,
        "job": {"job_id": job_id, "status": job["status"], "model_id": model_id},
        "accuracy": accuracy,
        "risk": risk,
        "generated_at": time.time(),
    }


#: required report keys and the types their values must satisfy
REPORT_SCHEMA: dict[str, type | tuple] = {
    "scenario": str,
    "seed": int,
    "epsilon": (int, float),
    "farmers": list,
    "similarity": dict,
    "job": dict,
    "accuracy": (int, float),
    "risk": dict,
    "generated_at": (int, float),
}


def validate_report(doc: dict) -> list[str]:
    problems = []
    for key, kind in REPORT_SCHEMA.items():
        if key not in doc:
            problems.append(f"missing key {key!r}")
        elif not isinstance(doc[key], kind):
            problems.append(f"key {key!r} has type {type(doc[key]).__name__}")
    if not problems:
        sim = doc["similarity"]
        if "scores" not in sim or not isinstance(sim["scores"], list):
            problems.append("similarity.scores missing or not a list")
        else:
            for s in sim["scores"]:
                if set(s) != {"peer", "score"}:
                    problems.append(f"similarity entry carries extra fields: {sorted(s)}")
                    break
        if not (0.0 <= doc["accuracy"] <= 1.0):
            problems.append("accuracy out of [0, 1]")
    return problems


def write_report(report: dict, path: str | None) -> str:
    text = json.dumps(report, indent=2, sort_keys=True)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return text
