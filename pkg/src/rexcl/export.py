"""Interchange formats for requirement rows: CSV, JSON, and YAML.

CSV carries the six review-tool columns (the corrected type, when present,
wins the Object Type column); JSON and YAML carry every row field so the
review state survives a round trip.
"""

from __future__ import annotations

import csv
import io
import json
from enum import Enum

import yaml

from .model import ClassLabel, RequirementRow, RowKind
from .serialize import row_from_dict, row_to_dict

CSV_COLUMNS = (
    "Object Identifier",
    "Object Number",
    "Object Heading",
    "Object Text",
    "Object Level",
    "Object Type",
)

ROW_FIELDS = tuple(
    row_to_dict(
        RequirementRow(
            object_identifier="d-R00001",
            object_number="1",
            object_heading="x",
            object_text="",
            object_level=1,
            kind=RowKind.TITLE,
        )
    )
)


class ExportFormat(Enum):
    CSV = "csv"
    JSON = "json"
    YAML = "yaml"


class ParseError(ValueError):
    """Input does not match the schema; points at the offending record."""

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field is not None:
            location.append(f"field {field!r}")
        suffix = f" ({', '.join(location)})" if location else ""
        super().__init__(message + suffix)
        self.line = line
        self.field = field


class _ExportDumper(yaml.SafeDumper):
    """Forces double-quoted style for U+0085 so it is escaped, not folded.

    YAML 1.1 counts NEL as a line break; emitted literally it reloads as a
    space. Double-quoted scalars escape it as \\N and survive the trip.
    """


def _represent_str(dumper: yaml.SafeDumper, value: str) -> yaml.ScalarNode:
    style = '"' if "\x85" in value else None
    return dumper.represent_scalar("tag:yaml.org,2002:str", value, style=style)


_ExportDumper.add_representer(str, _represent_str)


def write(rows: list[RequirementRow], format: ExportFormat) -> bytes:
    """Serialize rows; output bytes are identical for identical input."""
    if format is ExportFormat.CSV:
        return _write_csv(rows)
    if format is ExportFormat.JSON:
        data = [row_to_dict(r) for r in rows]
        return (json.dumps(data, indent=2, ensure_ascii=False) + "\n").encode()
    data = [row_to_dict(r) for r in rows]
    return yaml.dump(
        data,
        Dumper=_ExportDumper,
        sort_keys=False,
        allow_unicode=True,
        default_flow_style=False,
    ).encode()


def read(data: bytes, format: ExportFormat) -> list[RequirementRow]:
    """Parse bytes produced by write (or schema-conformant input)."""
    if format is ExportFormat.CSV:
        return _read_csv(data)
    if format is ExportFormat.JSON:
        try:
            parsed = json.loads(data.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
        return _rows_from_list(parsed)
    try:
        parsed = yaml.safe_load(data.decode("utf-8"))
    except (UnicodeDecodeError, yaml.YAMLError) as exc:
        raise ParseError(f"invalid YAML: {exc}") from exc
    if parsed is None:
        parsed = []
    return _rows_from_list(parsed)


def _csv_field(value: str) -> str:
    # csv.writer only quotes characters found in its lineterminator, which
    # leaves a bare "\r" unquoted and the output unparseable; quote the full
    # RFC 4180 set instead.
    if "\x00" in value:
        raise ValueError("CSV cannot carry NUL characters")
    if any(c in value for c in ',"\r\n'):
        return '"' + value.replace('"', '""') + '"'
    return value


def _write_csv(rows: list[RequirementRow]) -> bytes:
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        effective = row.effective_type
        lines.append(
            ",".join(
                _csv_field(value)
                for value in (
                    row.object_identifier,
                    row.object_number,
                    row.object_heading,
                    row.object_text,
                    str(row.object_level),
                    effective.value if effective else "",
                )
            )
        )
    return "".join(line + "\n" for line in lines).encode()


def _read_csv(data: bytes) -> list[RequirementRow]:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"invalid UTF-8: {exc}") from exc
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("missing CSV header") from None
    if tuple(header) != CSV_COLUMNS:
        missing = [c for c in CSV_COLUMNS if c not in header]
        if missing:
            raise ParseError(f"missing column {missing[0]!r}", line=1, field=missing[0])
        raise ParseError(f"unexpected header: {header}", line=1)
    rows = []
    for line, record in enumerate(reader, start=2):
        if len(record) != len(CSV_COLUMNS):
            raise ParseError(
                f"expected {len(CSV_COLUMNS)} fields, found {len(record)}", line=line
            )
        identifier, number, heading, text_field, level, object_type = record
        try:
            level_value = int(level)
        except ValueError:
            raise ParseError(
                f"Object Level must be an integer, got {level!r}",
                line=line,
                field="Object Level",
            ) from None
        try:
            label = ClassLabel(object_type) if object_type else None
        except ValueError:
            raise ParseError(
                f"unknown Object Type {object_type!r}", line=line, field="Object Type"
            ) from None
        kind = RowKind.TITLE if heading else RowKind.TEXT
        try:
            rows.append(
                RequirementRow(
                    object_identifier=identifier,
                    object_number=number,
                    object_heading=heading,
                    object_text=text_field,
                    object_level=level_value,
                    kind=kind,
                    object_type=label,
                )
            )
        except ValueError as exc:
            raise ParseError(str(exc), line=line) from exc
    return rows


def _rows_from_list(parsed: object) -> list[RequirementRow]:
    if not isinstance(parsed, list):
        raise ParseError("top-level value must be a list of row objects")
    rows = []
    for index, item in enumerate(parsed):
        if not isinstance(item, dict):
            raise ParseError("row entries must be objects", line=index + 1)
        missing = [f for f in ROW_FIELDS if f not in item]
        if missing:
            raise ParseError(
                f"missing field {missing[0]!r}", line=index + 1, field=missing[0]
            )
        try:
            rows.append(row_from_dict(item))
        except (ValueError, TypeError) as exc:
            raise ParseError(str(exc), line=index + 1) from exc
    return rows
