"""Correction state machine, event-sourced persistence, and the HTTP API."""

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

import pytest
from fastapi.testclient import TestClient

from rexcl.classify import preprocess, save_model, train_baseline
from rexcl.evalkit import generate_labeled_rows
from rexcl.ingest import PagedDocument, SourceMode, to_units
from rexcl.model import ClassLabel, ReviewState, RowKind
from rexcl.section_extract import assemble, to_rows
from rexcl.serialize import row_to_dict
from rexcl.service import (
    ActionKind,
    Correction,
    DocumentStore,
    NotFoundError,
    ServiceError,
    StoredDocument,
    apply_correction,
    create_app,
    document_from_dict,
    document_to_dict,
    replay,
)

MD_DOC = (
    "# 1 Scope\n"
    "The system shall respond to queries.\n"
    "The service must log every request.\n"
    "<!-- page: 2 -->\n"
    "# 2 Performance\n"
    "Latency shall stay below an agreed bound.\n"
)


def make_doc() -> StoredDocument:
    paged = PagedDocument(
        "D1",
        (("# 1 A", "t1", "t2"), ("# 2 B", "t3")),
        SourceMode.MARKDOWN,
    )
    units = to_units(paged)
    extraction = assemble(units, SourceMode.MARKDOWN, doc_id="D1")
    rows = [
        replace(
            row,
            object_type=(
                ClassLabel.HEADER if row.kind is RowKind.TITLE else ClassLabel.FUNC_REQ
            ),
            confidence=0.9,
        )
        for row in to_rows(extraction)
    ]
    return StoredDocument(
        doc_id="D1",
        filename="d1.md",
        mode=SourceMode.MARKDOWN,
        source_text="# 1 A\nt1\nt2\n<!-- page: 2 -->\n# 2 B\nt3\n",
        units=tuple(units),
        extraction=extraction,
        baseline_rows=tuple(rows),
    )


def rows_as_json(rows) -> str:
    return json.dumps([row_to_dict(r) for r in rows], sort_keys=True)


class TestApplyCorrection:
    def test_confirm_transitions_and_audits(self):
        doc = make_doc()
        updated = apply_correction(doc, "D1-R00002", Correction(ActionKind.CONFIRM))
        assert doc.audit == ()  # input untouched
        assert len(updated.audit) == 1
        row = next(r for r in updated.live_rows() if r.object_identifier == "D1-R00002")
        assert row.review_state is ReviewState.CONFIRMED

    def test_correct_sets_corrected_type(self):
        doc = apply_correction(
            make_doc(),
            "D1-R00002",
            Correction(ActionKind.CORRECT, label=ClassLabel.NON_FUNC_REQ),
        )
        row = next(r for r in doc.live_rows() if r.object_identifier == "D1-R00002")
        assert row.review_state is ReviewState.CORRECTED
        assert row.corrected_type is ClassLabel.NON_FUNC_REQ
        assert row.effective_type is ClassLabel.NON_FUNC_REQ
        assert doc.audit[-1].old == "FUNC_REQ" and doc.audit[-1].new == "NON_FUNC_REQ"

    def test_confirm_after_correct_clears_override(self):
        doc = apply_correction(
            make_doc(),
            "D1-R00002",
            Correction(ActionKind.CORRECT, label=ClassLabel.INFO),
        )
        doc = apply_correction(doc, "D1-R00002", Correction(ActionKind.CONFIRM))
        row = next(r for r in doc.live_rows() if r.object_identifier == "D1-R00002")
        assert row.review_state is ReviewState.CONFIRMED
        assert row.corrected_type is None
        assert row.effective_type is ClassLabel.FUNC_REQ

    def test_correct_with_current_label_rejected(self):
        with pytest.raises(ServiceError, match="CONFIRM"):
            apply_correction(
                make_doc(),
                "D1-R00002",
                Correction(ActionKind.CORRECT, label=ClassLabel.FUNC_REQ),
            )

    def test_correct_requires_label(self):
        with pytest.raises(ServiceError, match="label"):
            apply_correction(make_doc(), "D1-R00002", Correction(ActionKind.CORRECT))

    def test_edit_text_rewrites_text_rows_only(self):
        doc = apply_correction(
            make_doc(),
            "D1-R00002",
            Correction(ActionKind.EDIT_TEXT, text="rewritten body"),
        )
        row = next(r for r in doc.live_rows() if r.object_identifier == "D1-R00002")
        assert row.object_text == "rewritten body"
        with pytest.raises(ServiceError, match="TEXT rows"):
            apply_correction(
                make_doc(), "D1-R00001", Correction(ActionKind.EDIT_TEXT, text="x")
            )
        with pytest.raises(ServiceError, match="non-empty"):
            apply_correction(
                make_doc(), "D1-R00002", Correction(ActionKind.EDIT_TEXT, text="  ")
            )

    def test_unknown_row_not_found(self):
        doc = make_doc()
        with pytest.raises(NotFoundError):
            apply_correction(doc, "D1-R09999", Correction(ActionKind.CONFIRM))
        assert doc.audit == ()

    def test_every_mutation_appends_exactly_one_event(self):
        doc = make_doc()
        actions = [
            Correction(ActionKind.CONFIRM),
            Correction(ActionKind.CORRECT, label=ClassLabel.INFO),
            Correction(ActionKind.EDIT_TEXT, text="patched"),
        ]
        for i, action in enumerate(actions, start=1):
            doc = apply_correction(doc, "D1-R00002", action)
            assert len(doc.audit) == i
            assert doc.audit[-1].seq == i


class TestReplay:
    def test_replay_reproduces_live_state_byte_for_byte(self):
        doc = make_doc()
        doc = apply_correction(
            doc, "D1-R00002", Correction(ActionKind.CORRECT, label=ClassLabel.INFO)
        )
        doc = apply_correction(doc, "D1-R00003", Correction(ActionKind.CONFIRM))
        doc = apply_correction(
            doc, "D1-R00002", Correction(ActionKind.EDIT_TEXT, text="new body")
        )
        replayed = replay(doc.baseline_rows, doc.audit[doc.baseline_seq :])
        assert rows_as_json(replayed) == rows_as_json(doc.live_rows())

    def test_document_dict_round_trip(self):
        doc = apply_correction(
            make_doc(), "D1-R00002", Correction(ActionKind.CORRECT, label=ClassLabel.INFO)
        )
        assert document_from_dict(document_to_dict(doc)) == doc


class TestDocumentStore:
    def test_persisted_state_survives_reload(self, tmp_path):
        store = DocumentStore(tmp_path)
        doc = apply_correction(
            make_doc(), "D1-R00002", Correction(ActionKind.CONFIRM)
        )
        store.put(doc)
        reloaded = DocumentStore(tmp_path).get("D1")
        assert document_to_dict(reloaded) == document_to_dict(doc)

    def test_index_lists_documents(self, tmp_path):
        store = DocumentStore(tmp_path)
        store.put(make_doc())
        index = json.loads((tmp_path / "index.json").read_text())
        assert index["documents"]["D1"]["filename"] == "d1.md"
        assert store.ids() == ["D1"]

    def test_missing_document(self, tmp_path):
        with pytest.raises(NotFoundError):
            DocumentStore(tmp_path).get("nope")


@pytest.fixture()
def client(tmp_path):
    app = create_app(tmp_path / "data")
    with TestClient(app) as c:
        c.data_dir = tmp_path / "data"
        c.tmp_path = tmp_path
        yield c


def upload(client, content=MD_DOC, name="reqs.md"):
    response = client.post("/documents", files={"file": (name, content.encode())})
    assert response.status_code == 201, response.text
    return response.json()["doc_id"]


def extract(client, doc_id, **body):
    response = client.post(f"/documents/{doc_id}/extract", json=body)
    assert response.status_code == 200, response.text
    return response.json()


def baseline_model_path(tmp_path):
    rows = generate_labeled_rows(5, 200, separation=1.0)
    model = train_baseline([(preprocess(t), kind, label) for t, kind, label in rows])
    path = tmp_path / "baseline.json"
    save_model(model, path)
    return str(path)


def classify(client, doc_id):
    path = baseline_model_path(client.tmp_path)
    response = client.post(
        f"/documents/{doc_id}/classify",
        json={"binding": {"kind": "builtin", "model_path": path}},
    )
    assert response.status_code == 200, response.text
    return response.json()


class TestHttpApi:
    def test_healthz(self, client):
        assert client.get("/healthz").json() == {"status": "ok"}

    def test_upload_and_listing(self, client):
        doc_id = upload(client)
        listing = client.get("/documents").json()["documents"]
        assert [d["doc_id"] for d in listing] == [doc_id]
        assert listing[0]["extracted"] is False

    def test_unsupported_upload_type(self, client):
        response = client.post("/documents", files={"file": ("reqs.pdf", b"%PDF-1.4")})
        assert response.status_code == 415
        body = response.json()
        assert body["code"] == "unsupported-media-type"
        assert "convert" in body["message"]

    def test_invalid_utf8_upload(self, client):
        response = client.post("/documents", files={"file": ("reqs.md", b"\xff\xfe")})
        assert response.status_code == 400
        assert response.json()["code"] == "invalid-argument"

    def test_units_endpoint(self, client):
        doc_id = upload(client)
        units = client.get(f"/documents/{doc_id}/units").json()["units"]
        assert [u["text"] for u in units][:2] == ["# 1 Scope", "The system shall respond to queries."]

    def test_extract_builds_rows(self, client):
        doc_id = upload(client)
        result = extract(client, doc_id)
        assert result["tuples"] == 2
        assert result["rows"] == 5
        listing = client.get("/documents").json()["documents"]
        assert listing[0]["extracted"] is True

    def test_rows_pagination(self, client):
        doc_id = upload(client)
        extract(client, doc_id)
        page = client.get(f"/documents/{doc_id}/rows", params={"offset": 1, "limit": 2}).json()
        assert page["total"] == 5
        assert [r["object_identifier"] for r in page["rows"]] == [
            f"{doc_id}-R00002",
            f"{doc_id}-R00003",
        ]
        assert client.get(f"/documents/{doc_id}/rows", params={"limit": 0}).status_code == 400
        assert client.get(f"/documents/{doc_id}/rows", params={"offset": -1}).status_code == 400
        assert (
            client.get(f"/documents/{doc_id}/rows", params={"limit": 10**6}).status_code
            == 400
        )

    def test_unknown_document_is_404(self, client):
        response = client.get("/documents/zzz/rows")
        assert response.status_code == 404
        assert response.json()["code"] == "not-found"

    def test_classify_requires_extraction(self, client):
        doc_id = upload(client)
        path = baseline_model_path(client.tmp_path)
        response = client.post(
            f"/documents/{doc_id}/classify",
            json={"binding": {"kind": "builtin", "model_path": path}},
        )
        assert response.status_code == 409
        assert response.json()["code"] == "invalid-state"

    def test_classify_labels_every_row(self, client):
        doc_id = upload(client)
        extract(client, doc_id)
        assert classify(client, doc_id)["rows"] == 5
        rows = client.get(f"/documents/{doc_id}/rows").json()["rows"]
        assert all(r["object_type"] for r in rows)
        assert all(0 <= r["confidence"] <= 1 for r in rows)

    def test_unreachable_external_classifier_is_502(self, client):
        doc_id = upload(client)
        extract(client, doc_id)
        response = client.post(
            f"/documents/{doc_id}/classify",
            json={
                "binding": {
                    "kind": "external",
                    "endpoint": "http://127.0.0.1:9/classify",
                    "timeout_ms": 300,
                }
            },
        )
        assert response.status_code == 502
        assert response.json()["code"] == "classification-failed"

    def test_unknown_binding_kind(self, client):
        doc_id = upload(client)
        extract(client, doc_id)
        response = client.post(
            f"/documents/{doc_id}/classify", json={"binding": {"kind": "oracle"}}
        )
        assert response.status_code == 400

    def correction_flow(self, client):
        doc_id = upload(client)
        extract(client, doc_id)
        classify(client, doc_id)
        rows = client.get(f"/documents/{doc_id}/rows").json()["rows"]
        text_row = next(r for r in rows if r["kind"] == "TEXT")
        other = next(
            label.value
            for label in ClassLabel
            if label.value != (text_row["corrected_type"] or text_row["object_type"])
        )
        return doc_id, text_row, other

    def test_patch_correct_and_export(self, client):
        doc_id, text_row, other = self.correction_flow(client)
        response = client.patch(
            f"/documents/{doc_id}/rows/{text_row['object_identifier']}",
            json={"action": "CORRECT", "label": other},
        )
        assert response.status_code == 200
        patched = response.json()["row"]
        assert patched["review_state"] == "CORRECTED"
        assert patched["corrected_type"] == other

        again = client.patch(
            f"/documents/{doc_id}/rows/{text_row['object_identifier']}",
            json={"action": "CORRECT", "label": other},
        )
        assert again.status_code == 400  # already effective; use CONFIRM

        csv_export = client.get(f"/documents/{doc_id}/export", params={"format": "csv"})
        assert csv_export.status_code == 200
        assert csv_export.headers["content-type"].startswith("text/csv")
        assert f'filename="{doc_id}.csv"' in csv_export.headers["content-disposition"]
        record = next(
            line
            for line in csv_export.text.splitlines()
            if line.startswith(text_row["object_identifier"])
        )
        assert record.endswith(f",{other}")

    def test_corrections_survive_reclassification(self, client):
        doc_id, text_row, other = self.correction_flow(client)
        row_id = text_row["object_identifier"]
        client.patch(
            f"/documents/{doc_id}/rows/{row_id}",
            json={"action": "CORRECT", "label": other},
        )
        classify(client, doc_id)
        rows = client.get(f"/documents/{doc_id}/rows").json()["rows"]
        kept = next(r for r in rows if r["object_identifier"] == row_id)
        assert kept["review_state"] == "CORRECTED"
        assert kept["corrected_type"] == other
        assert kept["object_type"] == other
        assert kept["confidence"] == 1.0

    def test_patch_validation_errors(self, client):
        doc_id, text_row, _ = self.correction_flow(client)
        row_id = text_row["object_identifier"]
        title_id = f"{doc_id}-R00001"
        assert (
            client.patch(
                f"/documents/{doc_id}/rows/{row_id}", json={"action": "SHRED"}
            ).status_code
            == 400
        )
        assert (
            client.patch(
                f"/documents/{doc_id}/rows/{row_id}",
                json={"action": "CORRECT", "label": "WISH"},
            ).status_code
            == 400
        )
        assert (
            client.patch(
                f"/documents/{doc_id}/rows/{title_id}",
                json={"action": "EDIT_TEXT", "text": "x"},
            ).status_code
            == 400
        )
        assert (
            client.patch(
                f"/documents/{doc_id}/rows/{doc_id}-R09999", json={"action": "CONFIRM"}
            ).status_code
            == 404
        )

    def test_export_formats_and_errors(self, client):
        doc_id = upload(client)
        assert (
            client.get(f"/documents/{doc_id}/export", params={"format": "csv"}).status_code
            == 409
        )
        extract(client, doc_id)
        for fmt, prefix in (("csv", "text/csv"), ("json", "application/json"), ("yaml", "application/x-yaml")):
            response = client.get(f"/documents/{doc_id}/export", params={"format": fmt})
            assert response.status_code == 200
            assert response.headers["content-type"].startswith(prefix)
        assert (
            client.get(f"/documents/{doc_id}/export", params={"format": "xlsx"}).status_code
            == 400
        )

    def test_persisted_audit_replays_to_live_state(self, client):
        doc_id, text_row, other = self.correction_flow(client)
        row_id = text_row["object_identifier"]
        client.patch(
            f"/documents/{doc_id}/rows/{row_id}",
            json={"action": "CORRECT", "label": other},
        )
        client.patch(
            f"/documents/{doc_id}/rows/{row_id}",
            json={"action": "EDIT_TEXT", "text": "amended body"},
        )
        client.patch(f"/documents/{doc_id}/rows/{doc_id}-R00001", json={"action": "CONFIRM"})

        stored = document_from_dict(
            json.loads((client.data_dir / f"{doc_id}.json").read_text())
        )
        replayed = replay(stored.baseline_rows, stored.audit[stored.baseline_seq :])
        via_api = client.get(
            f"/documents/{doc_id}/rows", params={"limit": 1000}
        ).json()["rows"]
        assert json.dumps([row_to_dict(r) for r in replayed], sort_keys=True) == json.dumps(
            via_api, sort_keys=True
        )

    def test_concurrent_corrections_are_serialized(self, client):
        doc_id = upload(client)
        extract(client, doc_id)
        rows = client.get(f"/documents/{doc_id}/rows").json()["rows"]
        ids = [r["object_identifier"] for r in rows]

        def confirm(row_id):
            return client.patch(
                f"/documents/{doc_id}/rows/{row_id}", json={"action": "CONFIRM"}
            ).status_code

        with ThreadPoolExecutor(max_workers=5) as pool:
            statuses = list(pool.map(confirm, ids))
        assert statuses == [200] * len(ids)
        stored = document_from_dict(
            json.loads((client.data_dir / f"{doc_id}.json").read_text())
        )
        assert len(stored.audit) == len(ids)
        assert [e.seq for e in stored.audit] == list(range(1, len(ids) + 1))
        assert all(
            r["review_state"] == "CONFIRMED"
            for r in client.get(f"/documents/{doc_id}/rows").json()["rows"]
        )
