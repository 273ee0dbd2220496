"""Shared domain types: text units, section tuples, and schema rows."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class ClassLabel(Enum):
    """Requirement type assigned to one output row."""

    HEADER = "HEADER"
    INFO = "INFO"
    FUNC_REQ = "FUNC_REQ"
    NON_FUNC_REQ = "NON_FUNC_REQ"


class RowKind(Enum):
    TITLE = "TITLE"
    TEXT = "TEXT"


class ReviewState(Enum):
    UNREVIEWED = "UNREVIEWED"
    CONFIRMED = "CONFIRMED"
    CORRECTED = "CORRECTED"


@dataclass(frozen=True)
class TextUnit:
    """One non-blank line of the intermediate representation.

    ``text`` keeps the raw line content, markdown markers included.
    ``line_index`` is the 0-based position among the retained (non-blank)
    lines of ``page``; ``page_line_count`` counts those retained lines.
    """

    text: str
    page: int
    line_index: int
    page_line_count: int
    md_heading_depth: int = 0
    is_table_row: bool = False

    def __post_init__(self) -> None:
        if self.page < 1:
            raise ValueError(f"page must be >= 1, got {self.page}")
        if not 0 <= self.line_index < self.page_line_count:
            raise ValueError(
                f"line_index {self.line_index} out of range for "
                f"page_line_count {self.page_line_count}"
            )
        if self.md_heading_depth < 0:
            raise ValueError("md_heading_depth must be >= 0")
        if self.md_heading_depth > 0 and not self.text.startswith(
            "#" * self.md_heading_depth
        ):
            raise ValueError(
                "md_heading_depth > 0 requires the text to begin with that many '#'"
            )


@dataclass(frozen=True)
class SectionTitle:
    """Parsed section number plus heading.

    ``canonical_path`` is the normalized numeric path (roman numerals and
    alphabetic labels are folded into integers). It may be empty only in the
    transient state of a synthesized title that has not yet been assigned a
    path during assembly.
    """

    raw_label: str
    canonical_path: tuple[int, ...]
    heading: str
    synthesized: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "canonical_path", tuple(self.canonical_path))
        if not self.canonical_path and not self.synthesized:
            raise ValueError("canonical_path must be non-empty for parsed titles")
        if self.heading != self.heading.strip():
            raise ValueError("heading must carry no leading/trailing whitespace")


@dataclass(frozen=True)
class SectionTuple:
    """A section title together with its ordered body texts."""

    title: SectionTitle
    texts: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "texts", tuple(self.texts))


@dataclass(frozen=True)
class ExtractionResult:
    """Ordered section tuples plus the units dropped as header/footer."""

    doc_id: str
    tuples: tuple[SectionTuple, ...] = ()
    removed_units: tuple[TextUnit, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "tuples", tuple(self.tuples))
        object.__setattr__(self, "removed_units", tuple(self.removed_units))


@dataclass(frozen=True)
class RequirementRow:
    """One row of the tabular output schema.

    TITLE rows carry the heading and an empty text; TEXT rows the converse.
    ``corrected_type`` is set exactly when ``review_state`` is CORRECTED.
    """

    object_identifier: str
    object_number: str
    object_heading: str
    object_text: str
    object_level: int
    kind: RowKind
    object_type: ClassLabel | None = None
    confidence: float | None = None
    review_state: ReviewState = ReviewState.UNREVIEWED
    corrected_type: ClassLabel | None = None

    def __post_init__(self) -> None:
        if self.object_level != object_level(self.object_number):
            raise ValueError(
                f"object_level {self.object_level} does not match the component "
                f"count of {self.object_number!r}"
            )
        if self.kind is RowKind.TITLE:
            if not self.object_heading or self.object_text:
                raise ValueError("TITLE rows need a heading and no text")
        else:
            if self.object_heading or not self.object_text:
                raise ValueError("TEXT rows need a text and no heading")
        if (self.review_state is ReviewState.CORRECTED) != (
            self.corrected_type is not None
        ):
            raise ValueError("corrected_type is set exactly when state is CORRECTED")
        if self.confidence is not None and not 0.0 <= self.confidence <= 1.0:
            raise ValueError("confidence must lie in [0, 1]")

    @property
    def effective_type(self) -> ClassLabel | None:
        """The human-corrected label when present, else the model label."""
        return self.corrected_type if self.corrected_type is not None else self.object_type


@dataclass(frozen=True)
class FinalOutput:
    """Classified rows: every row carries an object_type."""

    doc_id: str
    rows: tuple[RequirementRow, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", tuple(self.rows))
        for row in self.rows:
            if row.object_type is None:
                raise ValueError(
                    f"row {row.object_identifier} is missing an object_type"
                )


def render_number(path: list[int] | tuple[int, ...]) -> str:
    """Render a canonical path as a dotted-decimal string, e.g. [1, 4] -> "1.4"."""
    if not path:
        raise ValueError("cannot render an empty path")
    for component in path:
        if component < 0:
            raise ValueError(f"path components must be non-negative, got {component}")
    return ".".join(str(component) for component in path)


def parse_number(number: str) -> tuple[int, ...]:
    """Parse a dotted-decimal string back into its canonical path."""
    if not number:
        raise ValueError("cannot parse an empty section number")
    parts = number.split(".")
    try:
        path = tuple(int(part) for part in parts)
    except ValueError:
        raise ValueError(f"malformed section number: {number!r}") from None
    if any(part != str(component) for part, component in zip(parts, path)):
        raise ValueError(f"malformed section number: {number!r}")
    if any(component < 0 for component in path):
        raise ValueError(f"malformed section number: {number!r}")
    return path


def object_level(number: str) -> int:
    """Depth of a row in the numbering hierarchy = its component count."""
    return len(parse_number(number))


def object_identifier(doc_id: str, ordinal: int) -> str:
    """Stable per-document row identifier, e.g. "D1-R00001"."""
    if ordinal < 1:
        raise ValueError("ordinal must be >= 1")
    return f"{doc_id}-R{ordinal:05d}"
