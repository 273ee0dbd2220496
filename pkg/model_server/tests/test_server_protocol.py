"""Wire-protocol conformance against the shared fixture requests."""

import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from model_server import create_app

FIXTURE = Path(__file__).resolve().parents[2] / "tests" / "fixtures" / "classify_protocol.json"


@pytest.fixture(scope="module")
def protocol():
    return json.loads(FIXTURE.read_text(encoding="utf-8"))


@pytest.fixture(scope="module")
def client(served_checkpoint):
    return TestClient(create_app(served_checkpoint))


def test_fixture_requests_conform(client, protocol):
    label_set = set(protocol["label_set"])
    for request in protocol["requests"]:
        response = client.post("/classify", json=request)
        assert response.status_code == 200
        labels = response.json()["labels"]
        assert [entry["id"] for entry in labels] == [
            row["id"] for row in request["rows"]
        ]
        for entry in labels:
            assert entry["label"] in label_set
            assert 0.0 <= entry["confidence"] <= 1.0


def test_thousand_row_batch_answers_every_id(client):
    rows = [
        {
            "id": f"D9-R{i + 1:05d}",
            "text": f"The system shall process item {i}.",
            "kind": "TITLE" if i % 7 == 0 else "TEXT",
        }
        for i in range(1000)
    ]
    response = client.post("/classify", json={"rows": rows})
    assert response.status_code == 200
    labels = response.json()["labels"]
    assert [entry["id"] for entry in labels] == [row["id"] for row in rows]


def test_malformed_requests_are_4xx(client):
    assert client.post("/classify", json={}).status_code == 422
    assert client.post("/classify", json={"rows": [{"id": "x"}]}).status_code == 422
    bad_kind = {"rows": [{"id": "x", "text": "y", "kind": "CHAPTER"}]}
    assert client.post("/classify", json=bad_kind).status_code == 400


def test_empty_row_list_is_a_valid_request(client):
    response = client.post("/classify", json={"rows": []})
    assert response.status_code == 200
    assert response.json() == {"labels": []}


def test_healthz(client):
    assert client.get("/healthz").json() == {"status": "ok"}


def test_upstream_client_understands_the_responses(client, served_checkpoint):
    """Drive the app through the consuming package's own HTTP binding."""
    rexcl_classify = pytest.importorskip("rexcl.classify")
    import httpx

    if not isinstance(client, httpx.Client):
        pytest.skip("TestClient is not an httpx.Client in this environment")
    rexcl_model = pytest.importorskip("rexcl.model")
    rows = [
        rexcl_model.RequirementRow(
            object_identifier=f"D1-R{i + 1:05d}",
            object_number=f"1.{i + 1}",
            object_heading="",
            object_text=f"The system shall archive record {i}.",
            object_level=2,
            kind=rexcl_model.RowKind.TEXT,
        )
        for i in range(5)
    ]
    binding = rexcl_classify.ExternalBinding(endpoint="/classify")
    output = rexcl_classify.classify_rows(binding, rows, client=client)
    assert [row.object_identifier for row in output.rows] == [
        row.object_identifier for row in rows
    ]
    assert all(row.object_type is not None for row in output.rows)
