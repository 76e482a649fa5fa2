import json
import subprocess
import sys

import numpy as np
import pytest
from fastapi.testclient import TestClient

from tenderscreen import models as M
from tenderscreen.features import TrainingData
from tenderscreen.screens import SCREEN_NAMES
from tenderscreen.service import create_app
from tenderscreen.store import RunStore


@pytest.fixture(scope="module")
def fig4_cart():
    """Depth-1 tree splitting on cv at ~0.053, like the manager's tool.

    Labels carry 8% noise so the leaves hold fractional probabilities.
    """
    rng = np.random.default_rng(0)
    X = np.zeros((400, 8))
    X[:, 0] = rng.uniform(0.0, 0.12, size=400)
    X[:, 1:] = rng.uniform(0.1, 2.0, size=(400, 7))
    y = ((X[:, 0] < 0.053) ^ (rng.uniform(size=400) < 0.08)).astype(float)
    data = TrainingData(X=X, y=y, feature_names=SCREEN_NAMES, feature_mode="raw_screens",
                        tender_ids=tuple(str(i) for i in range(400)))
    model = M.train_cart(data, M.CartConfig(seed=1))
    assert model.diagnostics["depth"] == 1
    return model


@pytest.fixture()
def store_with_model(tmp_path, fig4_cart):
    store = RunStore(tmp_path / "store")
    model_id = store.put_model(fig4_cart)
    return tmp_path / "store", model_id


@pytest.fixture()
def client(store_with_model):
    path, model_id = store_with_model
    app = create_app(path, default_model_id=model_id)
    with TestClient(app) as c:
        c.model_id = model_id
        c.store_path = path
        yield c


def test_health(client):
    r = client.get("/health")
    assert r.status_code == 200
    assert r.json()["status"] == "ok"


def test_screen_basic_and_tree_path(client):
    r = client.post("/screen", json={"bids": [100, 120, 140], "tender_id": "T1"})
    assert r.status_code == 200
    body = r.json()
    assert abs(body["screens"]["cv"] - 20 / 120) < 1e-12
    assert body["model_id"] == client.model_id
    assert body["thresholds"] == {"suspicious": 0.5, "very_suspicious": 0.7}
    # cv about 0.167 >= 0.053 -> competitive side of the tree
    assert body["probability"] < 0.2
    assert body["light"] == "green"
    steps = body["tree_path"]["steps"]
    assert "cv >=" in steps[0]["test"]
    assert steps[0]["taken"] == "yes"
    assert steps[-1]["leaf_class"] == 0


def test_screen_low_cv_flags(client):
    r = client.post("/screen", json={"bids": [100, 100.5, 101]})
    body = r.json()
    assert body["probability"] > 0.85
    assert body["light"] == "very_suspicious"
    assert body["tree_path"]["steps"][0]["taken"] == "no"


def test_screen_two_bids_422(client):
    r = client.post("/screen", json={"bids": [100, 120]})
    assert r.status_code == 422
    assert r.json()["error"] == "TooFewBids"


def test_screen_malformed_400(client):
    r = client.post("/screen", json={"bids": "nope"})
    assert r.status_code == 400
    assert r.json()["error"] == "MalformedBody"


def test_screen_unknown_model_404(client):
    r = client.post("/screen", json={"bids": [100, 120, 140], "model_id": "missing"})
    assert r.status_code == 404


def test_threshold_override(client):
    # leaf probability is ~0.93: raising the upper threshold above it
    # downgrades the verdict from very_suspicious to suspicious
    r = client.post("/screen", json={
        "bids": [100, 100.5, 101],
        "thresholds": {"suspicious": 0.5, "very_suspicious": 0.98},
    })
    body = r.json()
    assert 0.85 < body["probability"] < 0.98
    assert body["light"] == "suspicious"


def test_tenders_persist_and_reports_sum(client):
    bids_sets = {
        "A1": [100, 100.4, 100.9],   # tight -> flagged
        "A2": [100, 118, 135],
        "A3": [100, 125, 160, 180],
        "A4": [100, 100.2, 100.7],   # tight -> flagged
    }
    for tid, bids in bids_sets.items():
        r = client.post("/tenders", json={"tender_id": tid, "bids": bids, "region": "ZH"})
        assert r.status_code == 201
    listing = client.get("/tenders").json()
    assert listing["total"] == 4
    summary = client.get("/reports/summary").json()
    assert summary["suspicious"]["count"] + summary["non_suspicious"]["count"] == 4
    assert summary["model_id"] == client.model_id
    clusters = client.get("/reports/clusters", params={"group_by": "region"}).json()
    assert sum(g["total"] for g in clusters["groups"]) == 4
    one = client.get("/tenders/A1").json()
    assert one["light"] == "very_suspicious"
    assert client.get("/tenders/missing").status_code == 404
    # filters
    flagged = client.get("/tenders", params={"light": "very_suspicious"}).json()
    assert {t["tender_id"] for t in flagged["tenders"]} == {"A1", "A4"}


def test_flags_lifecycle_and_conflict(client):
    client.post("/tenders", json={"tender_id": "F1", "bids": [100, 100.3, 100.8]})
    r = client.post("/flags", json={"tender_id": "F1", "manager_id": "mgr1", "note": "looks off"})
    assert r.status_code == 201
    flag = r.json()
    assert flag["status"] == "open"
    dup = client.post("/flags", json={"tender_id": "F1", "manager_id": "mgr1", "note": "again"})
    assert dup.status_code == 409
    other = client.post("/flags", json={"tender_id": "F1", "manager_id": "mgr2"})
    assert other.status_code == 201
    r = client.patch(f"/flags/{flag['flag_id']}", json={"status": "reviewed"})
    assert r.json()["status"] == "reviewed"
    # reviewed flag no longer blocks a new one
    again = client.post("/flags", json={"tender_id": "F1", "manager_id": "mgr1"})
    assert again.status_code == 201
    assert client.patch("/flags/zzz", json={"status": "reviewed"}).status_code == 404
    flags = client.get("/flags").json()["flags"]
    assert any(f["note"] == "looks off" for f in flags)


def test_store_survives_restart(store_with_model, fig4_cart):
    path, model_id = store_with_model
    with TestClient(create_app(path, default_model_id=model_id)) as c1:
        c1.post("/tenders", json={"tender_id": "R1", "bids": [100, 100.2, 100.5]})
        c1.post("/flags", json={"tender_id": "R1", "manager_id": "m"})
    with TestClient(create_app(path, default_model_id=model_id)) as c2:
        models = c2.get("/models").json()["models"]
        assert [m["model_id"] for m in models] == [model_id]
        assert c2.get("/tenders/R1").status_code == 200
        flags = c2.get("/flags").json()["flags"]
        assert len(flags) == 1 and flags[0]["status"] == "open"
        dup = c2.post("/flags", json={"tender_id": "R1", "manager_id": "m"})
        assert dup.status_code == 409


def test_model_endpoints(client, fig4_cart):
    listing = client.get("/models").json()
    assert listing["default_model_id"] == client.model_id
    doc = client.get(f"/models/{client.model_id}").json()
    assert doc["family"] == "cart"
    assert "tree_diagram" in doc
    assert client.get("/models/unknown").status_code == 404


def test_bearer_token_auth(store_with_model):
    path, model_id = store_with_model
    app = create_app(path, default_model_id=model_id, token="sekret")
    with TestClient(app) as c:
        assert c.get("/health").status_code == 200  # exempt
        assert c.get("/models").status_code == 401
        assert c.get("/models", headers={"Authorization": "Bearer wrong"}).status_code == 401
        ok = c.get("/models", headers={"Authorization": "Bearer sekret"})
        assert ok.status_code == 200


def test_cli_and_service_agree(tmp_path, store_with_model, fig4_cart):
    """Screening the same bids via CLI and via POST /screen matches exactly."""
    path, model_id = store_with_model
    model_file = tmp_path / "model.json"
    model_file.write_text(fig4_cart.serialize(), "utf-8")
    csv_file = tmp_path / "one.csv"
    csv_file.write_text(
        "tender_id,firm_id,bid_value\nT1,A,100\nT1,B,120\nT1,C,140\n", "utf-8"
    )
    out = subprocess.run(
        [sys.executable, "-m", "tenderscreen.cli", "screen",
         "--input", str(csv_file), "--model", str(model_file), "--json"],
        capture_output=True, text=True, check=True,
    )
    cli_verdict = json.loads(out.stdout)["verdicts"][0]
    app = create_app(path, default_model_id=model_id)
    with TestClient(app) as c:
        api = c.post("/screen", json={"bids": [100, 120, 140]}).json()
    assert api["probability"] == cli_verdict["probability"]
    assert api["light"] == cli_verdict["light"]
