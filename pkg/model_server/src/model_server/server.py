"""HTTP classification endpoint.

POST /classify takes {"rows": [{"id", "text", "kind"}]} and answers
{"labels": [{"id", "label", "confidence"}]} in request order. Anything
that does not fit the protocol gets a 4xx, never a silent guess.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .encoder import Checkpoint
from .training import classify

ROW_KINDS = ("TITLE", "TEXT")


class WireRow(BaseModel):
    id: str
    text: str
    kind: str


class ClassifyRequest(BaseModel):
    rows: list[WireRow]


class WireLabel(BaseModel):
    id: str
    label: str
    confidence: float


class ClassifyResponse(BaseModel):
    labels: list[WireLabel]


def create_app(checkpoint: Checkpoint) -> FastAPI:
    if checkpoint.head is None:
        raise ValueError("checkpoint has no classification head")
    app = FastAPI(title="model-server")

    @app.get("/healthz")
    def healthz() -> dict[str, str]:
        return {"status": "ok"}

    @app.post("/classify", response_model=ClassifyResponse)
    def classify_endpoint(request: ClassifyRequest) -> ClassifyResponse:
        for row in request.rows:
            if row.kind not in ROW_KINDS:
                raise HTTPException(
                    status_code=400, detail=f"unknown row kind {row.kind!r}"
                )
        results = classify(
            checkpoint, [(row.text, row.kind) for row in request.rows]
        )
        return ClassifyResponse(
            labels=[
                WireLabel(id=row.id, label=label, confidence=confidence)
                for row, (label, confidence) in zip(request.rows, results)
            ]
        )

    return app
