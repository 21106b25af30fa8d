import pytest
from fastapi.testclient import TestClient

from telewig.reports import run_table
from telewig.service.app import app
from telewig.service.models import GainSpec, RangeSpec, RunConfig

client = TestClient(app)


def test_health():
    r = client.get("/health")
    assert r.status_code == 200
    assert r.json() == {"status": "ok"}


def test_sweep_endpoint_matches_inprocess():
    cfg = RunConfig(command="sweep", vsq_db=RangeSpec(start=-5, stop=-3, step=1),
                    gain=GainSpec(mode="optimal"))
    r = client.post("/sweep", json=cfg.model_dump())
    assert r.status_code == 200
    doc = r.json()
    local = run_table(cfg)
    assert doc["columns"] == local.columns
    for got, want in zip(doc["rows"], local.rows):
        assert got == pytest.approx(want)


def test_endpoint_overrides_command_field():
    # posting to /threshold wins over a mismatched command in the body
    cfg = RunConfig(command="sweep", eta=RangeSpec(start=1.0, stop=1.0, step=1))
    r = client.post("/threshold", json=cfg.model_dump())
    assert r.status_code == 200
    assert r.json()["columns"][0] == "eta"


def test_usage_error_maps_to_422():
    cfg = RunConfig(command="sweep",
                    vsq_db=RangeSpec(start=-3, stop=-10, step=1))
    r = client.post("/sweep", json=cfg.model_dump())
    assert r.status_code == 422
    assert "empty" in r.json()["detail"]
    # malformed body is also a 422, via pydantic
    r2 = client.post("/sweep", json={"seed": -1})
    assert r2.status_code == 422


def test_verify_endpoint():
    cfg = RunConfig(command="verify", perturb=True)
    r = client.post("/verify", json=cfg.model_dump())
    assert r.status_code == 200
    doc = r.json()
    assert doc["passed"] is False
    failed = [s["name"] for s in doc["suites"] if not s["passed"]]
    assert failed == ["channel-quadrature"]
