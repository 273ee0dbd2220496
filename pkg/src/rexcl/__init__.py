"""Requirement extraction and classification toolkit.

Turns semi-structured requirement documents (markdown or paged plain text)
into numbered section/text rows, removes repeating headers and footers with
a small random forest, labels rows with a four-class requirement taxonomy,
and serves a human review workflow with CSV/JSON/YAML export.
"""

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
    object_identifier,
    object_level,
    parse_number,
    render_number,
)

__version__ = "0.1.0"

__all__ = [
    "ClassLabel",
    "ExtractionResult",
    "FinalOutput",
    "RequirementRow",
    "ReviewState",
    "RowKind",
    "SectionTitle",
    "SectionTuple",
    "TextUnit",
    "object_identifier",
    "object_level",
    "parse_number",
    "render_number",
    "__version__",
]
