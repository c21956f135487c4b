import json
from unittest.mock import patch

from fastapi.testclient import TestClient

from cartandress.core.exceptions import VerificationError
from cartandress.interfaces.api import API_DATA_DIR, app

client = TestClient(app)

FLAT = {"name": "flat", "chart": {"num_points": 3, "seed": 2}}


def test_root_service():
    """Root endpoint should return API metadata."""
    resp = client.get("/")
    assert resp.status_code == 200
    data = resp.json()
    assert data["service"] == "Cartan Dressing Verifier API"
    assert "verify" in data["endpoints"]
    assert data["status"] == "Running"


def test_health_check():
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json()["status"] == "ok"


def test_list_suites():
    resp = client.get("/api/v1/suites")
    assert resp.status_code == 200
    data = resp.json()
    names = [s["name"] for s in data["suites"]]
    assert names[0] == "lie_iso"
    assert "potential_vev" in names
    assert "metric_signature" in data["conventions"]


def test_verify_inline_scenario(isolated_env):
    resp = client.post("/api/v1/verify", json={"scenario": FLAT, "suites": ["lie_iso", "bianchi"]})
    assert resp.status_code == 200, resp.text
    data = resp.json()
    assert data["verdict"] == "pass"
    assert data["scenario"] == "flat"
    assert [s["name"] for s in data["suites"]] == ["lie_iso", "bianchi"]


def test_verify_corrupted_connection_fails(isolated_env):
    resp = client.post("/api/v1/verify", json={"scenario": FLAT, "suites": ["normality"], "corrupt_p": 0.5})
    assert resp.status_code == 200
    assert resp.json()["verdict"] == "fail"


def test_verify_rejects_malformed_scenario():
    resp = client.post("/api/v1/verify", json={"scenario": {"tetrad": {"kind": "riemannian"}}})
    assert resp.status_code == 400
    assert "Invalid input" in resp.json()["detail"]


def test_verify_rejects_unknown_suite(isolated_env):
    resp = client.post("/api/v1/verify", json={"scenario": FLAT, "suites": ["nope"]})
    assert resp.status_code == 400


def test_verify_validates_options():
    resp = client.post("/api/v1/verify", json={"scenario": FLAT, "points": 0})
    assert resp.status_code == 422


def test_degenerate_scenario_reports_point(isolated_env):
    scenario = dict(FLAT, tractor=["0", "0", "0", "0", "0", "0"])
    resp = client.post("/api/v1/verify", json={"scenario": scenario, "suites": ["lie_iso"]})
    assert resp.status_code == 422
    detail = resp.json()["detail"]
    assert len(detail["point"]) == 4
    assert "σ-component" in detail["error"]


def test_verify_upload(tmp_path, isolated_env):
    path = tmp_path / "flat.json"
    path.write_text(json.dumps(FLAT))
    with open(path, "rb") as f:
        resp = client.post(
            "/api/v1/verify/upload",
            files={"scenario_file": ("flat.json", f, "application/json")},
            data={"suite": "lie_iso", "points": "2"},
        )
    assert resp.status_code == 200, resp.text
    data = resp.json()
    assert [s["name"] for s in data["suites"]] == ["lie_iso"]
    assert data["suites"][0]["points"] == 2


def test_verify_upload_missing_file():
    resp = client.post("/api/v1/verify/upload")
    assert resp.status_code == 422


def test_lagrangian_endpoint(isolated_env):
    resp = client.post("/api/v1/lagrangian", json={"scenario": FLAT, "lagrangian_points": 1})
    assert resp.status_code == 200, resp.text
    data = resp.json()
    assert len(data["rows"]) == 3
    assert data["potential"]["mass"] == 1.0


def test_lagrangian_rejects_non_positive_beta():
    resp = client.post("/api/v1/lagrangian", json={"scenario": dict(FLAT, lagrangian={"alpha": 1, "beta": 0})})
    assert resp.status_code == 400


def test_verification_failure_returns_500(isolated_env):
    with patch("cartandress.interfaces.api.run_verification", side_effect=VerificationError("Suite crashed")):
        resp = client.post("/api/v1/verify", json={"scenario": FLAT})
    assert resp.status_code == 500
    assert "Verification failed: Suite crashed" in resp.json()["detail"]


def test_cleanup_uploads_creates_and_deletes():
    """Should delete leftover files under the upload directory."""
    API_DATA_DIR.mkdir(parents=True, exist_ok=True)
    dummy = API_DATA_DIR / "temp_test.txt"
    dummy.write_text("test123")

    resp = client.delete("/api/v1/uploads/cleanup")
    assert resp.status_code == 200
    data = resp.json()
    assert "temp_test.txt" in data["deleted_files"]
    assert dummy.exists() is False


def test_cleanup_uploads_partial_failure():
    """Cleanup handles deletion errors gracefully."""
    API_DATA_DIR.mkdir(parents=True, exist_ok=True)
    dummy = API_DATA_DIR / "locked.txt"
    dummy.write_text("test")

    with patch("aiofiles.os.remove", side_effect=Exception("Locked")):
        resp = client.delete("/api/v1/uploads/cleanup")

    assert resp.status_code == 200
    assert "locked.txt" not in resp.json()["deleted_files"]
    dummy.unlink()
