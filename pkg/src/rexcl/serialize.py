"""Dict codecs for the domain types, shared by file formats, CLI, and service."""

from __future__ import annotations

import json
from pathlib import Path

from .model import (
    ClassLabel,
    ExtractionResult,
    FinalOutput,
    RequirementRow,
    ReviewState,
    RowKind,
    SectionTitle,
    SectionTuple,
    TextUnit,
)

EXTRACTION_SCHEMA_VERSION = 1
FINAL_SCHEMA_VERSION = 1


def unit_to_dict(unit: TextUnit) -> dict:
    return {
        "text": unit.text,
        "page": unit.page,
        "line_index": unit.line_index,
        "page_line_count": unit.page_line_count,
        "md_heading_depth": unit.md_heading_depth,
        "is_table_row": unit.is_table_row,
    }


def unit_from_dict(data: dict) -> TextUnit:
    return TextUnit(
        text=data["text"],
        page=int(data["page"]),
        line_index=int(data["line_index"]),
        page_line_count=int(data["page_line_count"]),
        md_heading_depth=int(data.get("md_heading_depth", 0)),
        is_table_row=bool(data.get("is_table_row", False)),
    )


def title_to_dict(title: SectionTitle) -> dict:
    return {
        "raw_label": title.raw_label,
        "canonical_path": list(title.canonical_path),
        "heading": title.heading,
        "synthesized": title.synthesized,
    }


def title_from_dict(data: dict) -> SectionTitle:
    return SectionTitle(
        raw_label=data["raw_label"],
        canonical_path=tuple(int(c) for c in data["canonical_path"]),
        heading=data["heading"],
        synthesized=bool(data["synthesized"]),
    )


def extraction_to_dict(extraction: ExtractionResult) -> dict:
    return {
        "version": EXTRACTION_SCHEMA_VERSION,
        "doc_id": extraction.doc_id,
        "tuples": [
            {
                "title": title_to_dict(t.title),
                "texts": list(t.texts),
            }
            for t in extraction.tuples
        ],
        "removed_units": [unit_to_dict(u) for u in extraction.removed_units],
    }


def extraction_from_dict(data: dict) -> ExtractionResult:
    if data.get("version") != EXTRACTION_SCHEMA_VERSION:
        raise ValueError(f"unsupported extraction version: {data.get('version')!r}")
    return ExtractionResult(
        doc_id=data["doc_id"],
        tuples=tuple(
            SectionTuple(
                title=title_from_dict(t["title"]),
                texts=tuple(str(x) for x in t["texts"]),
            )
            for t in data["tuples"]
        ),
        removed_units=tuple(unit_from_dict(u) for u in data["removed_units"]),
    )


def row_to_dict(row: RequirementRow) -> dict:
    return {
        "object_identifier": row.object_identifier,
        "object_number": row.object_number,
        "object_heading": row.object_heading,
        "object_text": row.object_text,
        "object_level": row.object_level,
        "kind": row.kind.value,
        "object_type": row.object_type.value if row.object_type else None,
        "confidence": row.confidence,
        "review_state": row.review_state.value,
        "corrected_type": row.corrected_type.value if row.corrected_type else None,
    }


def row_from_dict(data: dict) -> RequirementRow:
    return RequirementRow(
        object_identifier=data["object_identifier"],
        object_number=data["object_number"],
        object_heading=data["object_heading"],
        object_text=data["object_text"],
        object_level=int(data["object_level"]),
        kind=RowKind(data["kind"]),
        object_type=ClassLabel(data["object_type"]) if data.get("object_type") else None,
        confidence=None if data.get("confidence") is None else float(data["confidence"]),
        review_state=ReviewState(data.get("review_state", "UNREVIEWED")),
        corrected_type=(
            ClassLabel(data["corrected_type"]) if data.get("corrected_type") else None
        ),
    )


def final_to_dict(final: FinalOutput) -> dict:
    return {
        "version": FINAL_SCHEMA_VERSION,
        "doc_id": final.doc_id,
        "rows": [row_to_dict(r) for r in final.rows],
    }


def final_from_dict(data: dict) -> FinalOutput:
    if data.get("version") != FINAL_SCHEMA_VERSION:
        raise ValueError(f"unsupported final-output version: {data.get('version')!r}")
    return FinalOutput(
        doc_id=data["doc_id"],
        rows=tuple(row_from_dict(r) for r in data["rows"]),
    )


def save_json(data: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(data, indent=2, ensure_ascii=False) + "\n")


def load_json(path: str | Path) -> dict:
    return json.loads(Path(path).read_text())
