"""Review service: upload, extract, classify, correct, and export documents.

State is event-sourced per document: a baseline row snapshot (taken at the
last extract/classify) plus an append-only audit log of corrections. The
live rows are always the replay of the post-baseline events over the
snapshot, so persisted state can be verified byte-for-byte.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path

from fastapi import FastAPI, File, Request, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import export as export_format
from .classify import (
    BuiltinBinding,
    ClassificationError,
    ExternalBinding,
    classify_rows,
    load_model as load_baseline_model,
)
from .hf_filter import DEFAULT_ALLOWLIST, filter_units, load_allowlist, load_model
from .ingest import DocumentStructureError, SourceMode, read_paged, to_units
from .model import ClassLabel, ExtractionResult, RequirementRow, RowKind, TextUnit
from .section_extract import NumberingError, assemble, to_rows
from .serialize import (
    extraction_from_dict,
    extraction_to_dict,
    row_from_dict,
    row_to_dict,
    unit_from_dict,
    unit_to_dict,
)

DOCUMENT_SCHEMA_VERSION = 1
DEFAULT_PAGE_LIMIT = 200
MAX_PAGE_LIMIT = 1000

_MEDIA_TYPES = {
    export_format.ExportFormat.CSV: "text/csv; charset=utf-8",
    export_format.ExportFormat.JSON: "application/json",
    export_format.ExportFormat.YAML: "application/x-yaml",
}


class ServiceError(Exception):
    status = 400
    code = "invalid-argument"


class NotFoundError(ServiceError):
    status = 404
    code = "not-found"


class InvalidStateError(ServiceError):
    status = 409
    code = "invalid-state"


class UnsupportedTypeError(ServiceError):
    status = 415
    code = "unsupported-media-type"


class UpstreamError(ServiceError):
    status = 502
    code = "classification-failed"


class ActionKind(Enum):
    CONFIRM = "CONFIRM"
    CORRECT = "CORRECT"
    EDIT_TEXT = "EDIT_TEXT"


@dataclass(frozen=True)
class Correction:
    kind: ActionKind
    label: ClassLabel | None = None
    text: str | None = None


@dataclass(frozen=True)
class AuditEvent:
    seq: int
    row_id: str
    action: str
    old: str
    new: str
    timestamp: str


@dataclass(frozen=True)
class StoredDocument:
    doc_id: str
    filename: str
    mode: SourceMode
    source_text: str
    units: tuple[TextUnit, ...] = ()
    extraction: ExtractionResult | None = None
    baseline_rows: tuple[RequirementRow, ...] = ()
    baseline_seq: int = 0
    audit: tuple[AuditEvent, ...] = ()

    def live_rows(self) -> tuple[RequirementRow, ...]:
        return replay(self.baseline_rows, self.audit[self.baseline_seq :])


def _apply_event(rows: list[RequirementRow], event: AuditEvent) -> None:
    index = next(
        (i for i, r in enumerate(rows) if r.object_identifier == event.row_id), None
    )
    if index is None:
        raise NotFoundError(f"row {event.row_id} does not exist")
    row = rows[index]
    kind = ActionKind(event.action)
    if kind is ActionKind.CONFIRM:
        rows[index] = replace(
            row, review_state=row.review_state.__class__.CONFIRMED, corrected_type=None
        )
    elif kind is ActionKind.CORRECT:
        rows[index] = replace(
            row,
            review_state=row.review_state.__class__.CORRECTED,
            corrected_type=ClassLabel(event.new),
        )
    else:
        rows[index] = replace(row, object_text=event.new)


def replay(
    baseline: tuple[RequirementRow, ...], events: tuple[AuditEvent, ...]
) -> tuple[RequirementRow, ...]:
    """Fold audit events over the baseline snapshot, preserving row order."""
    rows = list(baseline)
    for event in events:
        _apply_event(rows, event)
    return tuple(rows)


def apply_correction(
    doc: StoredDocument, row_id: str, action: Correction
) -> StoredDocument:
    """Validate one correction and append its audit event; pure function."""
    rows = doc.live_rows()
    row = next((r for r in rows if r.object_identifier == row_id), None)
    if row is None:
        raise NotFoundError(f"row {row_id} does not exist")
    if action.kind is ActionKind.CONFIRM:
        old, new = row.review_state.value, "CONFIRMED"
    elif action.kind is ActionKind.CORRECT:
        if action.label is None:
            raise ServiceError("CORRECT requires a label")
        if row.effective_type == action.label:
            raise ServiceError(
                f"{action.label.value} is already the effective type; use CONFIRM"
            )
        old = row.effective_type.value if row.effective_type else ""
        new = action.label.value
    else:
        if row.kind is not RowKind.TEXT:
            raise ServiceError("EDIT_TEXT applies to TEXT rows only")
        if action.text is None or not action.text.strip():
            raise ServiceError("EDIT_TEXT requires non-empty text")
        old, new = row.object_text, action.text
    event = AuditEvent(
        seq=len(doc.audit) + 1,
        row_id=row_id,
        action=action.kind.value,
        old=old,
        new=new,
        timestamp=datetime.now(timezone.utc).isoformat(),
    )
    return replace(doc, audit=doc.audit + (event,))


def document_to_dict(doc: StoredDocument) -> dict:
    return {
        "version": DOCUMENT_SCHEMA_VERSION,
        "doc_id": doc.doc_id,
        "filename": doc.filename,
        "mode": doc.mode.value,
        "source_text": doc.source_text,
        "units": [unit_to_dict(u) for u in doc.units],
        "extraction": extraction_to_dict(doc.extraction) if doc.extraction else None,
        "baseline_rows": [row_to_dict(r) for r in doc.baseline_rows],
        "baseline_seq": doc.baseline_seq,
        "audit": [
            {
                "seq": e.seq,
                "row_id": e.row_id,
                "action": e.action,
                "old": e.old,
                "new": e.new,
                "timestamp": e.timestamp,
            }
            for e in doc.audit
        ],
    }


def document_from_dict(data: dict) -> StoredDocument:
    if data.get("version") != DOCUMENT_SCHEMA_VERSION:
        raise ValueError(f"unsupported document version: {data.get('version')!r}")
    return StoredDocument(
        doc_id=data["doc_id"],
        filename=data["filename"],
        mode=SourceMode(data["mode"]),
        source_text=data["source_text"],
        units=tuple(unit_from_dict(u) for u in data["units"]),
        extraction=(
            extraction_from_dict(data["extraction"]) if data["extraction"] else None
        ),
        baseline_rows=tuple(row_from_dict(r) for r in data["baseline_rows"]),
        baseline_seq=int(data["baseline_seq"]),
        audit=tuple(AuditEvent(**e) for e in data["audit"]),
    )


class DocumentStore:
    """File-backed store: one JSON per document, written atomically."""

    def __init__(self, data_dir: str | Path):
        self._dir = Path(data_dir)
        self._dir.mkdir(parents=True, exist_ok=True)
        self._mutex = threading.Lock()
        self._locks: dict[str, threading.RLock] = {}
        self._docs: dict[str, StoredDocument] = {}
        for path in sorted(self._dir.glob("*.json")):
            if path.name == "index.json":
                continue
            doc = document_from_dict(json.loads(path.read_text()))
            self._docs[doc.doc_id] = doc

    def lock(self, doc_id: str) -> threading.RLock:
        with self._mutex:
            return self._locks.setdefault(doc_id, threading.RLock())

    def ids(self) -> list[str]:
        with self._mutex:
            return sorted(self._docs)

    def get(self, doc_id: str) -> StoredDocument:
        with self._mutex:
            doc = self._docs.get(doc_id)
        if doc is None:
            raise NotFoundError(f"document {doc_id} does not exist")
        return doc

    def put(self, doc: StoredDocument) -> None:
        self._write_json(f"{doc.doc_id}.json", document_to_dict(doc))
        with self._mutex:
            self._docs[doc.doc_id] = doc
        self._write_index()

    def path_of(self, doc_id: str) -> Path:
        return self._dir / f"{doc_id}.json"

    def _write_index(self) -> None:
        with self._mutex:
            index = {
                "documents": {
                    doc_id: {"filename": doc.filename, "mode": doc.mode.value}
                    for doc_id, doc in sorted(self._docs.items())
                }
            }
        self._write_json("index.json", index)

    def _write_json(self, name: str, data: dict) -> None:
        target = self._dir / name
        tmp = self._dir / f".{name}.tmp"
        with open(tmp, "w", encoding="utf-8") as handle:
            json.dump(data, handle, ensure_ascii=False, indent=2)
            handle.write("\n")
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp, target)


class ExtractRequest(BaseModel):
    mode: str | None = None
    hf_model: str | None = None
    allowlist: str | None = None


class BindingSpec(BaseModel):
    kind: str
    model_path: str | None = None
    endpoint: str | None = None
    timeout_ms: int = 10_000


class ClassifyRequest(BaseModel):
    binding: BindingSpec


class PatchRequest(BaseModel):
    action: str
    label: str | None = None
    text: str | None = None


def _parse_mode(value: str) -> SourceMode:
    try:
        return SourceMode(value)
    except ValueError:
        raise ServiceError(f"unknown mode {value!r}; expected 'md' or 'txt'") from None


def _mode_for_filename(filename: str) -> SourceMode:
    suffix = Path(filename).suffix.lower()
    if suffix == ".md":
        return SourceMode.MARKDOWN
    if suffix == ".txt":
        return SourceMode.PLAINTEXT
    raise UnsupportedTypeError(
        f"unsupported file type {suffix!r}: upload .md or .txt "
        "(convert PDF/Word with an external tool first)"
    )


def create_app(data_dir: str | Path, ui_dir: str | Path | None = None) -> FastAPI:
    store = DocumentStore(data_dir)
    app = FastAPI(title="requirement review service")
    app.state.store = store

    @app.exception_handler(ServiceError)
    async def service_error(_: Request, exc: ServiceError) -> JSONResponse:
        return JSONResponse(
            status_code=exc.status, content={"code": exc.code, "message": str(exc)}
        )

    @app.exception_handler(RequestValidationError)
    async def validation_error(_: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(
            status_code=400,
            content={"code": "invalid-argument", "message": str(exc.errors()[:1])},
        )

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok"}

    @app.get("/documents")
    def list_documents() -> dict:
        documents = []
        for doc_id in store.ids():
            doc = store.get(doc_id)
            documents.append(
                {
                    "doc_id": doc.doc_id,
                    "filename": doc.filename,
                    "mode": doc.mode.value,
                    "extracted": doc.extraction is not None,
                    "classified": bool(doc.baseline_rows)
                    and all(r.object_type for r in doc.baseline_rows),
                }
            )
        return {"documents": documents}

    @app.post("/documents", status_code=201)
    async def upload(file: UploadFile = File(...)) -> dict:
        mode = _mode_for_filename(file.filename or "")
        payload = await file.read()
        doc_id = uuid.uuid4().hex[:12]
        try:
            paged = read_paged(payload, mode, doc_id=doc_id)
        except (DocumentStructureError, UnicodeDecodeError) as exc:
            raise ServiceError(f"cannot read document: {exc}") from exc
        doc = StoredDocument(
            doc_id=doc_id,
            filename=file.filename or f"{doc_id}.{mode.value}",
            mode=mode,
            source_text=payload.decode("utf-8", errors="replace"),
            units=tuple(to_units(paged)),
        )
        with store.lock(doc_id):
            store.put(doc)
        return {"doc_id": doc_id}

    @app.get("/documents/{doc_id}/units")
    def get_units(doc_id: str) -> dict:
        doc = store.get(doc_id)
        return {"doc_id": doc_id, "units": [unit_to_dict(u) for u in doc.units]}

    @app.post("/documents/{doc_id}/extract")
    def extract(doc_id: str, body: ExtractRequest) -> dict:
        with store.lock(doc_id):
            doc = store.get(doc_id)
            mode = _parse_mode(body.mode) if body.mode else doc.mode
            paged = read_paged(doc.source_text.encode(), mode, doc_id=doc_id)
            units = to_units(paged)
            removed: tuple[TextUnit, ...] = ()
            if body.hf_model:
                try:
                    model = load_model(body.hf_model)
                except (OSError, ValueError, KeyError) as exc:
                    raise ServiceError(f"cannot load hf model: {exc}") from exc
                allowlist = DEFAULT_ALLOWLIST
                if body.allowlist:
                    try:
                        allowlist = load_allowlist(body.allowlist)
                    except OSError as exc:
                        raise ServiceError(f"cannot load allowlist: {exc}") from exc
                kept, removed_list = filter_units(units, model, allowlist)
                units, removed = kept, tuple(removed_list)
            try:
                extraction = assemble(units, mode, doc_id=doc_id, removed_units=removed)
                rows = to_rows(extraction)
            except (DocumentStructureError, NumberingError) as exc:
                raise ServiceError(str(exc)) from exc
            doc = replace(
                doc,
                mode=mode,
                units=tuple(to_units(paged)),
                extraction=extraction,
                baseline_rows=rows,
                baseline_seq=len(doc.audit),
            )
            store.put(doc)
        return {
            "doc_id": doc_id,
            "tuples": len(extraction.tuples),
            "rows": len(rows),
            "removed_units": len(removed),
        }

    @app.post("/documents/{doc_id}/classify")
    def classify(doc_id: str, body: ClassifyRequest) -> dict:
        with store.lock(doc_id):
            doc = store.get(doc_id)
            if doc.extraction is None:
                raise InvalidStateError("document has not been extracted yet")
            spec = body.binding
            if spec.kind == "builtin":
                if not spec.model_path:
                    raise ServiceError("builtin binding requires model_path")
                try:
                    binding = BuiltinBinding(load_baseline_model(spec.model_path))
                except (OSError, ValueError, KeyError) as exc:
                    raise ServiceError(f"cannot load baseline model: {exc}") from exc
            elif spec.kind == "external":
                if not spec.endpoint:
                    raise ServiceError("external binding requires endpoint")
                binding = ExternalBinding(spec.endpoint, timeout_ms=spec.timeout_ms)
            else:
                raise ServiceError(f"unknown binding kind {spec.kind!r}")
            rows = doc.live_rows()
            if not rows:
                raise InvalidStateError("document has no rows to classify")
            try:
                final = classify_rows(binding, list(rows))
            except ClassificationError as exc:
                raise UpstreamError(str(exc)) from exc
            doc = replace(
                doc, baseline_rows=final.rows, baseline_seq=len(doc.audit)
            )
            store.put(doc)
        return {"doc_id": doc_id, "rows": len(final.rows)}

    @app.get("/documents/{doc_id}/rows")
    def rows(doc_id: str, offset: int = 0, limit: int = DEFAULT_PAGE_LIMIT) -> dict:
        if offset < 0:
            raise ServiceError("offset must be >= 0")
        if not 1 <= limit <= MAX_PAGE_LIMIT:
            raise ServiceError(f"limit must be in 1..{MAX_PAGE_LIMIT}")
        doc = store.get(doc_id)
        live = doc.live_rows()
        page = live[offset : offset + limit]
        return {
            "doc_id": doc_id,
            "total": len(live),
            "offset": offset,
            "limit": limit,
            "rows": [row_to_dict(r) for r in page],
        }

    @app.patch("/documents/{doc_id}/rows/{row_id}")
    def patch_row(doc_id: str, row_id: str, body: PatchRequest) -> dict:
        try:
            kind = ActionKind(body.action)
        except ValueError:
            raise ServiceError(f"unknown action {body.action!r}") from None
        label = None
        if body.label is not None:
            try:
                label = ClassLabel(body.label)
            except ValueError:
                raise ServiceError(f"unknown label {body.label!r}") from None
        correction = Correction(kind=kind, label=label, text=body.text)
        with store.lock(doc_id):
            doc = store.get(doc_id)
            doc = apply_correction(doc, row_id, correction)
            store.put(doc)
            updated = next(
                r for r in doc.live_rows() if r.object_identifier == row_id
            )
        return {"doc_id": doc_id, "row": row_to_dict(updated)}

    @app.get("/documents/{doc_id}/export")
    def export_rows(doc_id: str, format: str = "csv") -> Response:
        try:
            fmt = export_format.ExportFormat(format)
        except ValueError:
            raise ServiceError(f"unknown format {format!r}") from None
        doc = store.get(doc_id)
        if doc.extraction is None:
            raise InvalidStateError("document has not been extracted yet")
        data = export_format.write(list(doc.live_rows()), fmt)
        return Response(
            content=data,
            media_type=_MEDIA_TYPES[fmt],
            headers={
                "Content-Disposition": f'attachment; filename="{doc_id}.{fmt.value}"'
            },
        )

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
