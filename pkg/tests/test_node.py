import json
import threading
import time
import uuid

import numpy as np
import pytest

from agrifed.errors import DuplicateRequest, Unauthorized, UnknownDataset, UpstreamComputationError
from agrifed.fl.models import init_global, weights_from_json, weights_to_json
from agrifed.fl.training import Hyperparams
from agrifed.node.capability import mint_capability, verify_capability
from agrifed.node.service import ComputeRequest, FarmerNode
from agrifed.simctl.generate import DatasetSpec, generate_csv
from agrifed.store.catalog import Catalog
from agrifed.store.csvio import ingest_csv
from agrifed.store.db import DocumentStore

SECRET = "test-secret"


@pytest.fixture
def catalog(tmp_path):
    return Catalog(DocumentStore(str(tmp_path / "store")))


@pytest.fixture
def node(catalog):
    return FarmerNode(catalog, SECRET)


def upload(catalog, owner, seed=0, rows=20):
    spec = DatasetSpec(feature_dim=2, rows_per_farmer=rows, class_sep=2.0, seed=seed)
    ds = ingest_csv(owner, "data", generate_csv(spec, group=0, salt=seed))
    catalog.put_dataset(ds)
    return ds


def make_request(kind, dataset, payload, subject=None, secret=SECRET, request_id=None):
    token = mint_capability(secret, subject or dataset.owner, dataset.dataset_id, kind)
    return ComputeRequest(
        request_id=request_id or uuid.uuid4().hex,
        kind=kind,
        dataset_id=dataset.dataset_id,
        authorization=token,
        payload=payload,
    )


# -- capability tokens -------------------------------------------------------


def test_capability_round_trip():
    token = mint_capability(SECRET, "alice", "ds1", "sketch")
    claims = verify_capability(SECRET, token, "ds1", "sketch")
    assert claims["sub"] == "alice"


def test_capability_rejections():
    token = mint_capability(SECRET, "alice", "ds1", "sketch")
    with pytest.raises(Unauthorized):
        verify_capability("other-secret", token, "ds1", "sketch")
    with pytest.raises(Unauthorized):
        verify_capability(SECRET, token, "ds2", "sketch")
    with pytest.raises(Unauthorized):
        verify_capability(SECRET, token, "ds1", "local_train")
    with pytest.raises(Unauthorized):
        verify_capability(SECRET, token + "0", "ds1", "sketch")
    expired = mint_capability(SECRET, "alice", "ds1", "sketch", ttl=-1)
    with pytest.raises(Unauthorized):
        verify_capability(SECRET, expired, "ds1", "sketch")
    with pytest.raises(Unauthorized):
        verify_capability(SECRET, "garbage", "ds1", "sketch")


# -- dispatch ---------------------------------------------------------------------


def test_sketch_request_no_noise(catalog, node):
    ds = upload(catalog, "alice")
    result = node.handle(make_request("sketch", ds, {"epsilon": 1e12, "rng_seed": 1}))
    assert result.kind == "sketch"
    sketch = result.body["sketch"]
    assert len(sketch["noised"]) == 4 * 2 + 2
    assert sketch["epsilon"] == 1e12
    assert node.audit_state() == []


def test_local_train_zero_lr_returns_start(catalog, node):
    ds = upload(catalog, "alice")
    start = init_global("logistic_regression", 2, 2)
    payload = {
        "start": weights_to_json(start),
        "hyperparams": Hyperparams(learning_rate=0.0).to_json(),
        "round": 1,
    }
    result = node.handle(make_request("local_train", ds, payload))
    back = weights_from_json(result.body["update"]["weights"])
    assert all(np.array_equal(a, b) for a, b in zip(back.tensors, start.tensors))
    assert result.body["update"]["farmer"] == "alice"
    assert result.body["update"]["round"] == 1


def test_loss_eval_returns_only_loss_flag_farmer(catalog, node):
    ds = upload(catalog, "alice")
    payload = {"weights": weights_to_json(init_global("logistic_regression", 2, 2))}
    result = node.handle(make_request("loss_eval", ds, payload))
    samples = result.body["samples"]
    assert len(samples) == 20
    assert all(set(s) == {"loss", "member", "farmer"} for s in samples)


def test_foreign_token_rejected_without_computation(catalog, node):
    ds = upload(catalog, "alice")
    req = make_request("sketch", ds, {"epsilon": 1.0}, subject="mallory")
    with pytest.raises(Unauthorized):
        node.handle(req)
    assert node.audit_state() == []
    # the rejected request id was never consumed
    node.handle(make_request("sketch", ds, {"epsilon": 1.0}, request_id=req.request_id))


def test_unknown_dataset(catalog, node):
    token = mint_capability(SECRET, "alice", "missing", "sketch")
    req = ComputeRequest(uuid.uuid4().hex, "sketch", "missing", token, {"epsilon": 1.0})
    with pytest.raises(UnknownDataset):
        node.handle(req)
    assert node.audit_state() == []


def test_duplicate_request_id_rejected(catalog, node):
    ds = upload(catalog, "alice")
    req = make_request("sketch", ds, {"epsilon": 1.0}, request_id="fixed-id")
    node.handle(req)
    again = make_request("sketch", ds, {"epsilon": 1.0}, request_id="fixed-id")
    with pytest.raises(DuplicateRequest):
        node.handle(again)
    assert node.audit_state() == []


def test_unknown_kind_rejected(catalog, node):
    ds = upload(catalog, "alice")
    token = mint_capability(SECRET, "alice", ds.dataset_id, "sketch")
    req = ComputeRequest(uuid.uuid4().hex, "exfiltrate", ds.dataset_id, token, {})
    with pytest.raises(UpstreamComputationError):
        node.handle(req)


def test_computation_error_cleans_up(catalog, node):
    ds = upload(catalog, "alice")
    wrong = init_global("logistic_regression", 7, 2)  # dims mismatch
    payload = {"start": weights_to_json(wrong), "hyperparams": Hyperparams().to_json(), "round": 1}
    with pytest.raises(UpstreamComputationError) as err:
        node.handle(make_request("local_train", ds, payload))
    assert err.value.request_id is not None
    assert node.audit_state() == []


# -- deletion / scoping contracts ------------------------------------------------------


def test_audit_during_in_flight_request(catalog, node, monkeypatch):
    ds = upload(catalog, "alice")
    entered, release = threading.Event(), threading.Event()
    original = node._sketch

    def slow_sketch(dataset, payload):
        entered.set()
        release.wait(timeout=5)
        return original(dataset, payload)

    monkeypatch.setattr(node, "_sketch", slow_sketch)
    result = {}
    t = threading.Thread(
        target=lambda: result.update(
            out=node.handle(make_request("sketch", ds, {"epsilon": 1.0}))
        )
    )
    t.start()
    assert entered.wait(timeout=5)
    assert node.audit_state() == [ds.dataset_id]  # exactly the in-flight dataset
    release.set()
    t.join(timeout=5)
    assert node.audit_state() == []
    assert "out" in result


def test_concurrent_requests_are_segregated(catalog, node, monkeypatch):
    ds_a = upload(catalog, "alice", seed=1)
    ds_b = upload(catalog, "bob", seed=2)
    entered_a, entered_b, release = threading.Event(), threading.Event(), threading.Event()
    original = node._sketch

    def slow_sketch(dataset, payload):
        (entered_a if dataset.owner == "alice" else entered_b).set()
        release.wait(timeout=5)
        return original(dataset, payload)

    monkeypatch.setattr(node, "_sketch", slow_sketch)
    threads = [
        threading.Thread(target=node.handle, args=(make_request("sketch", d, {"epsilon": 1.0}),))
        for d in (ds_a, ds_b)
    ]
    for t in threads:
        t.start()
    assert entered_a.wait(timeout=5) and entered_b.wait(timeout=5)
    snapshot = node.registry.snapshot()
    assert sorted(snapshot.values()) == sorted([ds_a.dataset_id, ds_b.dataset_id])
    assert len(set(snapshot.keys())) == 2  # distinct request-scoped buffers
    release.set()
    for t in threads:
        t.join(timeout=5)
    assert node.audit_state() == []


def test_results_never_serialize_cell_values(catalog, node):
    # distinctive cell payloads that must not appear in any result
    sentinel_number = "73319.12597731"
    sentinel_label = "SECRETLABELXYZ"
    csv = (
        f"a,label\n{sentinel_number},{sentinel_label}\n"
        f"2.5,other\n3.5,{sentinel_label}\n4.5,other\n5.5,{sentinel_label}\n"
    ).encode()
    ds = ingest_csv("alice", "secret", csv)
    catalog.put_dataset(ds)

    start = init_global("logistic_regression", 1, 2)
    requests = [
        make_request("sketch", ds, {"epsilon": 1.0, "rng_seed": 7}),
        make_request(
            "local_train",
            ds,
            {"start": weights_to_json(start), "hyperparams": Hyperparams().to_json(), "round": 1},
        ),
        make_request("loss_eval", ds, {"weights": weights_to_json(start)}),
    ]
    for req in requests:
        wire = json.dumps(node.handle(req).to_json())
        assert sentinel_number not in wire
        assert sentinel_label not in wire


def test_random_request_storm_leaves_no_state(catalog, node):
    rng = np.random.default_rng(0)
    datasets = [upload(catalog, f"user{i}", seed=i) for i in range(3)]
    start = init_global("logistic_regression", 2, 2)
    for i in range(60):
        ds = datasets[int(rng.integers(0, 3))]
        roll = rng.random()
        try:
            if roll < 0.3:  # bad auth
                node.handle(make_request("sketch", ds, {"epsilon": 1.0}, subject="intruder"))
            elif roll < 0.5:  # computation error
                bad = init_global("logistic_regression", 9, 2)
                node.handle(
                    make_request(
                        "local_train",
                        ds,
                        {
                            "start": weights_to_json(bad),
                            "hyperparams": Hyperparams().to_json(),
                            "round": 1,
                        },
                    )
                )
            else:
                node.handle(make_request("sketch", ds, {"epsilon": 1.0, "rng_seed": i}))
        except (Unauthorized, UpstreamComputationError):
            pass
        assert node.audit_state() == []
