import json
import time

import pytest
import requests

from agrifed.server.config import AppConfig
from agrifed.simctl.generate import DatasetSpec, generate_csv
from agrifed.stack import launch_stack
from agrifed.store.documents import ModelRecord


@pytest.fixture(scope="module")
def stack(tmp_path_factory):
    s = launch_stack(str(tmp_path_factory.mktemp("stack-store")))
    yield s
    s.stop()


class Api:
    """Raw-response test client; keeps status codes visible."""

    def __init__(self, base_url):
        self.base = base_url

    def call(self, method, path, token=None, **kw):
        headers = kw.pop("headers", {})
        if token:
            headers["Authorization"] = f"Bearer {token}"
        return requests.request(method, f"{self.base}{path}", headers=headers, timeout=30, **kw)

    def ok(self, method, path, token=None, **kw):
        resp = self.call(method, path, token=token, **kw)
        assert resp.status_code == 200, f"{method} {path}: {resp.status_code} {resp.text}"
        return resp.json()

    def register_and_login(self, username, credential="pw"):
        resp = self.call(
            "POST", "/api/v1/auth/register", json={"username": username, "credential": credential}
        )
        assert resp.status_code in (200, 409)
        return self.ok(
            "POST", "/api/v1/auth/login", json={"username": username, "credential": credential}
        )["token"]

    def upload(self, token, name, payload: bytes):
        return self.ok(
            "POST",
            "/api/v1/datasets",
            token=token,
            files={"file": (f"{name}.csv", payload, "text/csv")},
            data={"name": name},
        )


@pytest.fixture(scope="module")
def api(stack):
    return Api(stack.base_url)


def csv_payload(seed=0, rows=30, feature_dim=2):
    spec = DatasetSpec(feature_dim=feature_dim, rows_per_farmer=rows, class_sep=2.0, seed=seed)
    return generate_csv(spec, group=0, salt=seed)


# -- auth ------------------------------------------------------------------------


def test_login_and_reject_wrong_credential(api):
    token = api.register_and_login("auth-user", "secret1")
    assert token
    resp = api.call(
        "POST", "/api/v1/auth/login", json={"username": "auth-user", "credential": "wrong"}
    )
    assert resp.status_code == 401
    assert resp.json()["code"] == "InvalidCredentials"
    resp = api.call(
        "POST", "/api/v1/auth/login", json={"username": "ghost-user", "credential": "x"}
    )
    assert resp.status_code == 404


def test_every_endpoint_rejects_missing_token(api):
    endpoints = [
        ("GET", "/api/v1/datasets"),
        ("POST", "/api/v1/similar"),
        ("GET", "/api/v1/chat/somebody"),
        ("POST", "/api/v1/chat/somebody"),
        ("POST", "/api/v1/jobs"),
        ("GET", "/api/v1/jobs/some-id"),
        ("GET", "/api/v1/models"),
        ("GET", "/api/v1/models/x/info"),
        ("GET", "/api/v1/models/x/risk"),
        ("GET", "/api/v1/models/x/logs"),
        ("POST", "/api/v1/models/x/predict"),
        ("GET", "/api/v1/datasets/x"),
        ("DELETE", "/api/v1/datasets/x"),
    ]
    for method, path in endpoints:
        resp = api.call(method, path, json={})
        assert resp.status_code == 401, f"{method} {path} admitted an anonymous caller"
        resp = api.call(method, path, token="bogus-token", json={})
        assert resp.status_code == 401, f"{method} {path} admitted a bogus token"


def test_expired_token_rejected(tmp_path):
    config = AppConfig(session_ttl_seconds=0.05)
    s = launch_stack(str(tmp_path / "exp-store"), config=config)
    try:
        api = Api(s.base_url)
        token = api.register_and_login("short-lived")
        time.sleep(0.2)
        resp = api.call("GET", "/api/v1/datasets", token=token)
        assert resp.status_code == 401
    finally:
        s.stop()


# -- datasets ----------------------------------------------------------------------


def test_upload_list_read_delete_cycle(api):
    token = api.register_and_login("uploader")
    meta = api.upload(token, "plot-a", b"a,b,label\n1,2,x\n3,4,y\n")
    assert meta["row_count"] == 2
    listed = api.ok("GET", "/api/v1/datasets", token=token)["datasets"]
    assert any(d["dataset_id"] == meta["dataset_id"] for d in listed)

    full = api.ok("GET", f"/api/v1/datasets/{meta['dataset_id']}", token=token)
    assert full["rows"] == [["1", "2", "x"], ["3", "4", "y"]]

    api.ok("DELETE", f"/api/v1/datasets/{meta['dataset_id']}", token=token)
    assert api.ok("GET", "/api/v1/datasets", token=token)["datasets"] == [
        d for d in listed if d["dataset_id"] != meta["dataset_id"]
    ]
    assert api.call("GET", f"/api/v1/datasets/{meta['dataset_id']}", token=token).status_code == 404


def test_upload_validation_codes_surface(api):
    token = api.register_and_login("validator")
    cases = [
        (b"a,b,target\n1,2,x\n", "MissingLabelColumn"),
        (b"a,b,label\n", "EmptyFile"),
        (b"1,2,3\n4,5,6\n", "MissingHeader"),
        (b"\x00\x01", "NotCsv"),
    ]
    for payload, code in cases:
        resp = api.call(
            "POST",
            "/api/v1/datasets",
            token=token,
            files={"file": ("bad.csv", payload, "text/csv")},
            data={"name": "bad"},
        )
        assert resp.status_code == 400
        assert resp.json()["code"] == code


def test_dataset_rows_are_owner_only(api):
    owner_token = api.register_and_login("rows-owner")
    intruder_token = api.register_and_login("rows-intruder")
    meta = api.upload(owner_token, "private-plot", csv_payload(seed=9))
    resp = api.call("GET", f"/api/v1/datasets/{meta['dataset_id']}", token=intruder_token)
    assert resp.status_code == 403
    resp = api.call("DELETE", f"/api/v1/datasets/{meta['dataset_id']}", token=intruder_token)
    assert resp.status_code == 403


# -- similar farmers ------------------------------------------------------------------


def test_find_similar_identical_datasets(api):
    token_a = api.register_and_login("sim-alice")
    token_b = api.register_and_login("sim-bob")
    payload = csv_payload(seed=3)
    ds_a = api.upload(token_a, "field", payload)
    api.upload(token_b, "field", payload)

    body = api.ok(
        "POST",
        "/api/v1/similar",
        token=token_a,
        json={"dataset_id": ds_a["dataset_id"], "epsilon": 1e12},
    )
    assert body["no_compatible_peers"] is False
    assert body["scores"][0]["peer"] == "sim-bob"
    assert body["scores"][0]["score"] == pytest.approx(1.0, abs=1e-6)


def test_find_similar_response_is_minimal(api):
    token = api.register_and_login("sim-minimal")
    ds = api.upload(token, "field", csv_payload(seed=3))
    body = api.ok(
        "POST", "/api/v1/similar", token=token, json={"dataset_id": ds["dataset_id"], "epsilon": 1e12}
    )
    assert set(body) == {"scores", "no_compatible_peers"}
    for entry in body["scores"]:
        assert set(entry) == {"peer", "score"}


def test_find_similar_no_compatible_peers(api):
    token = api.register_and_login("sim-loner")
    ds = api.upload(token, "odd-schema", b"only,label\n1,x\n2,y\n")
    body = api.ok("POST", "/api/v1/similar", token=token, json={"dataset_id": ds["dataset_id"]})
    assert body == {"scores": [], "no_compatible_peers": True}


def test_find_similar_requires_ownership(api):
    token_a = api.register_and_login("sim-owner2")
    token_b = api.register_and_login("sim-thief")
    ds = api.upload(token_a, "field", csv_payload(seed=5))
    resp = api.call(
        "POST", "/api/v1/similar", token=token_b, json={"dataset_id": ds["dataset_id"]}
    )
    assert resp.status_code == 403


def test_find_similar_epsilon_bounds(api):
    token = api.register_and_login("sim-eps")
    ds = api.upload(token, "field", csv_payload(seed=6))
    for bad in (0, -1, 1e13):
        resp = api.call(
            "POST",
            "/api/v1/similar",
            token=token,
            json={"dataset_id": ds["dataset_id"], "epsilon": bad},
        )
        assert resp.status_code == 400


# -- chat ----------------------------------------------------------------------------------


def test_chat_round_trip_and_cursor(api):
    token_a = api.register_and_login("chat-a")
    token_b = api.register_and_login("chat-b")

    first = api.ok("POST", "/api/v1/chat/chat-b", token=token_a, json={"body": "hello"})
    second = api.ok("POST", "/api/v1/chat/chat-a", token=token_b, json={"body": "hi back"})

    msgs = api.ok("GET", "/api/v1/chat/chat-b", token=token_a)["messages"]
    assert [m["message_id"] for m in msgs] == [first["message_id"], second["message_id"]]

    newer = api.ok(
        "GET", f"/api/v1/chat/chat-b?since={first['message_id']}", token=token_a
    )["messages"]
    assert [m["message_id"] for m in newer] == [second["message_id"]]

    # ordering is stable on refetch
    again = api.ok("GET", "/api/v1/chat/chat-a", token=token_b)["messages"]
    assert [m["message_id"] for m in again] == [m["message_id"] for m in msgs]


def test_chat_validation(api):
    token = api.register_and_login("chat-val")
    api.register_and_login("chat-peer")
    resp = api.call("POST", "/api/v1/chat/ghost", token=token, json={"body": "hi"})
    assert resp.status_code == 404
    resp = api.call("POST", "/api/v1/chat/chat-peer", token=token, json={"body": ""})
    assert resp.status_code == 400
    assert resp.json()["code"] == "EmptyBody"
    resp = api.call("POST", "/api/v1/chat/chat-peer", token=token, json={"body": "x" * 5000})
    assert resp.status_code == 400
    assert resp.json()["code"] == "BodyTooLarge"
    resp = api.call("POST", "/api/v1/chat/chat-val", token=token, json={"body": "self"})
    assert resp.status_code == 409


# -- training jobs ---------------------------------------------------------------------------


def run_training(api, owner_token, collaborators=None, seed=7, **form_extra):
    ds = api.upload(owner_token, f"train-{seed}", csv_payload(seed=seed, rows=40))
    form = {
        "name": f"model-{seed}-{time.time_ns()}",
        "model_type": "logistic_regression",
        "visibility": "public",
        "reference_dataset_id": ds["dataset_id"],
        "collaborators": collaborators or [],
        "hyperparams": {"rounds": 2, "local_epochs": 2, "seed": seed},
    }
    form.update(form_extra)
    job_id = api.ok("POST", "/api/v1/jobs", token=owner_token, json=form)["job_id"]
    deadline = time.time() + 60
    while True:
        status = api.ok("GET", f"/api/v1/jobs/{job_id}", token=owner_token)
        if status["status"] in ("completed", "failed"):
            return status
        assert time.time() < deadline, "job did not finish in time"
        time.sleep(0.05)


def test_job_submit_poll_complete_and_model_listed(api):
    token = api.register_and_login("job-owner")
    status = run_training(api, token, seed=8)
    assert status["status"] == "completed"
    model_id = status["model_id"]
    models = api.ok("GET", "/api/v1/models", token=token)["models"]
    assert any(m["model_id"] == model_id for m in models)


def test_job_missing_field_names_it(api):
    token = api.register_and_login("job-form")
    resp = api.call(
        "POST",
        "/api/v1/jobs",
        token=token,
        json={"model_type": "logistic_regression", "visibility": "public"},
    )
    assert resp.status_code == 400
    body = resp.json()
    assert body["code"] == "MissingField"
    assert body["field"] == "name"


def test_job_status_path_is_lifecycle_prefix(api):
    token = api.register_and_login("job-lifecycle")
    ds = api.upload(token, "lifecycle", csv_payload(seed=10, rows=60))
    form = {
        "name": f"lifecycle-{time.time_ns()}",
        "model_type": "logistic_regression",
        "visibility": "public",
        "reference_dataset_id": ds["dataset_id"],
        "hyperparams": {"rounds": 4, "local_epochs": 3, "seed": 2},
    }
    job_id = api.ok("POST", "/api/v1/jobs", token=token, json=form)["job_id"]
    seen = []
    deadline = time.time() + 60
    while time.time() < deadline:
        status = api.ok("GET", f"/api/v1/jobs/{job_id}", token=token)["status"]
        if not seen or seen[-1] != status:
            seen.append(status)
        if status in ("completed", "failed"):
            break
        time.sleep(0.01)
    full = ["queued", "running", "completed"]
    assert seen == full[len(full) - len(seen):] or seen == full[:len(seen)]
    assert seen[-1] == "completed"


# -- model repository -----------------------------------------------------------------------------


def test_model_info_exposes_exactly_the_declared_fields(api):
    token = api.register_and_login("info-owner")
    status = run_training(api, token, seed=11, readme="how to use this model")
    info = api.ok("GET", f"/api/v1/models/{status['model_id']}/info", token=token)
    assert set(info) == {
        "name",
        "model_type",
        "metadata",
        "owner",
        "visibility",
        "num_classes",
        "class_names",
        "training_status",
        "readme",
    }
    assert info["training_status"] == "trained"
    assert info["readme"] == "how to use this model"
    assert set(info["metadata"]) == {"schema_hash", "feature_columns"}


def test_private_model_reads_as_absent_to_outsiders(api):
    owner = api.register_and_login("priv-owner")
    outsider = api.register_and_login("priv-outsider")
    status = run_training(api, owner, seed=12, visibility="private")
    model_id = status["model_id"]

    assert api.ok("GET", f"/api/v1/models/{model_id}/info", token=owner)["visibility"] == "private"
    listed = api.ok("GET", "/api/v1/models", token=outsider)["models"]
    assert all(m["model_id"] != model_id for m in listed)

    resp_real = api.call("GET", f"/api/v1/models/{model_id}/info", token=outsider)
    resp_fake = api.call("GET", "/api/v1/models/does-not-exist/info", token=outsider)
    assert resp_real.status_code == resp_fake.status_code == 404
    assert resp_real.json()["code"] == resp_fake.json()["code"] == "NotFound"


def test_public_model_visible_to_everyone(api):
    owner = api.register_and_login("pub-owner")
    viewer = api.register_and_login("pub-viewer")
    status = run_training(api, owner, seed=13)
    info = api.ok("GET", f"/api/v1/models/{status['model_id']}/info", token=viewer)
    assert info["owner"] == "pub-owner"


# -- playground -------------------------------------------------------------------------------------


def test_playground_predictions_and_logging(api, stack):
    owner = api.register_and_login("play-owner")
    user = api.register_and_login("play-user")
    status = run_training(api, owner, seed=14)
    model_id = status["model_id"]

    rows = [[0.1, 0.2], [2.3, 0.4], [0.5, 2.6]]
    body = api.ok("POST", f"/api/v1/models/{model_id}/predict", token=user, json={"rows": rows})
    preds = body["predictions"]
    assert len(preds) == 3
    for p in preds:
        assert set(p) == {"probabilities", "predicted_class"}
        assert sum(p["probabilities"]) == pytest.approx(1.0, abs=1e-6)

    wire = json.dumps(body)
    assert "tensors" not in wire and "weights" not in wire

    logs = api.ok("GET", f"/api/v1/models/{model_id}/logs", token=owner)
    assert logs["activity"][-1]["user"] == "play-user"
    assert logs["activity"][-1]["query_count"] == 3


def test_playground_schema_mismatch_logs_nothing(api):
    owner = api.register_and_login("play-strict")
    status = run_training(api, owner, seed=15)
    model_id = status["model_id"]
    before = api.ok("GET", f"/api/v1/models/{model_id}/logs", token=owner)["activity"]

    resp = api.call(
        "POST",
        f"/api/v1/models/{model_id}/predict",
        token=owner,
        json={"rows": [[0.1, 0.2], ["junk-category", 0.4]]},
    )
    assert resp.status_code == 400
    assert resp.json()["code"] == "SchemaMismatch"
    after = api.ok("GET", f"/api/v1/models/{model_id}/logs", token=owner)["activity"]
    assert after == before


def test_playground_untrained_model_rejected(api, stack):
    owner = api.register_and_login("play-untrained")
    stack.catalog.put_model(
        ModelRecord(
            model_id="untrained-model",
            name="pending",
            model_type="logistic_regression",
            metadata={"schema_hash": "h", "feature_columns": []},
            owner="play-untrained",
            visibility="public",
            num_classes=2,
            class_names=["a", "b"],
            training_status="training",
            readme="",
            weights=None,
            created_at=time.time(),
        )
    )
    resp = api.call(
        "POST", "/api/v1/models/untrained-model/predict", token=owner, json={"rows": [[1]]}
    )
    assert resp.status_code == 400
    assert resp.json()["code"] == "ModelNotTrained"


# -- risk & logs ---------------------------------------------------------------------------------------


def test_risk_and_logs_owner_only(api):
    owner = api.register_and_login("risk-owner")
    other = api.register_and_login("risk-other")
    status = run_training(api, owner, seed=16)
    model_id = status["model_id"]

    risk = api.ok("GET", f"/api/v1/models/{model_id}/risk", token=owner)
    assert set(risk) == {
        "model_id",
        "attack_auc",
        "attack_advantage",
        "per_user",
        "overall",
        "plot_points",
    }
    for token in (other,):
        assert api.call("GET", f"/api/v1/models/{model_id}/risk", token=token).status_code == 403
        assert api.call("GET", f"/api/v1/models/{model_id}/logs", token=token).status_code == 403


def test_user_risk_weakly_increases_with_queries(api):
    owner = api.register_and_login("risk-grow")
    querier = api.register_and_login("risk-querier")
    status = run_training(api, owner, seed=17)
    model_id = status["model_id"]

    api.ok(
        "POST", f"/api/v1/models/{model_id}/predict", token=querier, json={"rows": [[0.1, 0.2]]}
    )
    first = api.ok("GET", f"/api/v1/models/{model_id}/risk", token=owner)
    risk_1 = next(u["risk"] for u in first["per_user"] if u["user"] == "risk-querier")

    api.ok(
        "POST",
        f"/api/v1/models/{model_id}/predict",
        token=querier,
        json={"rows": [[1.1, 1.2], [2.1, 2.2]]},
    )
    second = api.ok("GET", f"/api/v1/models/{model_id}/risk", token=owner)
    risk_2 = next(u["risk"] for u in second["per_user"] if u["user"] == "risk-querier")
    assert risk_2 >= risk_1
    assert second["overall"] >= first["overall"] - 1e-12


# -- consent flow -----------------------------------------------------------------------------------------


def test_manual_consent_gates_job_start(tmp_path):
    config = AppConfig(auto_consent=False)
    s = launch_stack(str(tmp_path / "consent-store"), config=config)
    try:
        api = Api(s.base_url)
        owner = api.register_and_login("consent-owner")
        collab = api.register_and_login("consent-collab")
        payload = csv_payload(seed=31)
        own_ds = api.upload(owner, "field", payload)
        collab_ds = api.upload(collab, "field", csv_payload(seed=32))

        form = {
            "name": "consented-model",
            "model_type": "logistic_regression",
            "visibility": "public",
            "reference_dataset_id": own_ds["dataset_id"],
            "collaborators": [
                {"username": "consent-collab", "dataset_id": collab_ds["dataset_id"]}
            ],
            "hyperparams": {"rounds": 1, "local_epochs": 1, "seed": 0},
        }
        body = api.ok("POST", "/api/v1/jobs", token=owner, json=form)
        job_id = body["job_id"]
        assert body["consent"] == "awaiting"

        status = api.ok("GET", f"/api/v1/jobs/{job_id}", token=owner)
        assert status["status"] == "awaiting_consent"

        # an outsider cannot consent
        outsider = api.register_and_login("consent-outsider")
        resp = api.call(
            "POST", f"/api/v1/jobs/{job_id}/consent", token=outsider, json={"accept": True}
        )
        assert resp.status_code in (403, 404)

        api.ok("POST", f"/api/v1/jobs/{job_id}/consent", token=collab, json={"accept": True})
        deadline = time.time() + 60
        while True:
            status = api.ok("GET", f"/api/v1/jobs/{job_id}", token=owner)
            if status["status"] in ("completed", "failed"):
                break
            assert time.time() < deadline
            time.sleep(0.05)
        assert status["status"] == "completed"
    finally:
        s.stop()


def test_consent_rejection_blocks_job(tmp_path):
    config = AppConfig(auto_consent=False)
    s = launch_stack(str(tmp_path / "reject-store"), config=config)
    try:
        api = Api(s.base_url)
        owner = api.register_and_login("reject-owner")
        collab = api.register_and_login("reject-collab")
        own_ds = api.upload(owner, "field", csv_payload(seed=33))
        collab_ds = api.upload(collab, "field", csv_payload(seed=34))

        job_id = api.ok(
            "POST",
            "/api/v1/jobs",
            token=owner,
            json={
                "name": "rejected-model",
                "model_type": "logistic_regression",
                "visibility": "public",
                "reference_dataset_id": own_ds["dataset_id"],
                "collaborators": [
                    {"username": "reject-collab", "dataset_id": collab_ds["dataset_id"]}
                ],
            },
        )["job_id"]
        api.ok("POST", f"/api/v1/jobs/{job_id}/consent", token=collab, json={"accept": False})
        status = api.ok("GET", f"/api/v1/jobs/{job_id}", token=owner)
        assert status["status"] == "rejected"
        # the job never reached the orchestrator's queue
        models = api.ok("GET", "/api/v1/models", token=owner)["models"]
        assert all(m["name"] != "rejected-model" for m in models)
    finally:
        s.stop()


# -- data blindness --------------------------------------------------------------------------------------


def test_no_response_carries_another_users_cells(api):
    # distinctive numeric cells; label classes are schema, not data, so they
    # are not sentinels (schema-compatible peers share class names by design)
    sentinel_number = "88819.77125331"
    sentinel_number_2 = "44923.5512973"
    victim = api.register_and_login("blind-victim")
    csv = (
        f"a,label\n{sentinel_number},yes\n1.25,no\n"
        f"2.25,yes\n{sentinel_number_2},no\n4.5,yes\n5.5,no\n"
    ).encode()
    victim_ds = api.upload(victim, "secret-field", csv)

    # victim trains a public model on the sensitive data and another user probes the API
    form = {
        "name": f"victim-model-{time.time_ns()}",
        "model_type": "logistic_regression",
        "visibility": "public",
        "reference_dataset_id": victim_ds["dataset_id"],
        "hyperparams": {"rounds": 1, "local_epochs": 1, "seed": 0},
    }
    job_id = api.ok("POST", "/api/v1/jobs", token=victim, json=form)["job_id"]
    deadline = time.time() + 60
    while api.ok("GET", f"/api/v1/jobs/{job_id}", token=victim)["status"] not in (
        "completed",
        "failed",
    ):
        assert time.time() < deadline
        time.sleep(0.05)

    spy = api.register_and_login("blind-spy")
    probe_csv = b"a,label\n7.5,yes\n8.5,no\n9.5,yes\n0.5,no\n"
    spy_ds = api.upload(spy, "probe", probe_csv)  # same schema, own values

    job_status = api.ok("GET", f"/api/v1/jobs/{job_id}", token=victim)
    model_id = job_status["model_id"]
    responses = [
        api.ok("GET", "/api/v1/datasets", token=spy),
        api.ok(
            "POST",
            "/api/v1/similar",
            token=spy,
            json={"dataset_id": spy_ds["dataset_id"], "epsilon": 1.0},
        ),
        api.ok("GET", "/api/v1/models", token=spy),
        api.ok("GET", f"/api/v1/models/{model_id}/info", token=spy),
        api.ok(
            "POST",
            f"/api/v1/models/{model_id}/predict",
            token=spy,
            json={"rows": [[1.0]]},
        ),
    ]
    for body in responses:
        wire = json.dumps(body)
        assert sentinel_number not in wire
        assert sentinel_number_2 not in wire
