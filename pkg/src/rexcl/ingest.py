"""Intermediate text representation: paged documents and their text units.

Accepts the text/markdown output of external converters. Plain text is paged
by form feeds; markdown additionally honors ``<!-- page: N -->`` break
comments and carries "#" heading markers and "|" table rows.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import BinaryIO

from .model import SectionTitle, TextUnit


class SourceMode(Enum):
    MARKDOWN = "md"
    PLAINTEXT = "txt"


class DocumentStructureError(ValueError):
    """The input could not be split into at least one page."""


PAGE_BREAK_COMMENT = re.compile(r"^\s*<!--\s*page:\s*\d+\s*-->\s*$")

# Heading grammar for lines without markdown markers: dotted-decimal,
# uppercase roman numeral (I..XXXIX), or a single capital letter. Roman and
# alpha labels need an explicit "." or ")" separator; dotted numbers a space.
_DOTTED_TITLE = re.compile(r"^(\d+(?:\.\d+)*)\.?\s+(\S.*)$")
_ROMAN_TITLE = re.compile(r"^([IVX]+)[.)]\s+(\S.*)$")
_ALPHA_TITLE = re.compile(r"^([A-Z])[.)]\s+(\S.*)$")

_ROMAN_VALUES = {"I": 1, "V": 5, "X": 10}

MAX_NUMBER_DEPTH = 6


@dataclass(frozen=True)
class PagedDocument:
    """Raw lines grouped into pages, before unit extraction."""

    doc_id: str
    pages: tuple[tuple[str, ...], ...]
    source_mode: SourceMode

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "pages", tuple(tuple(page) for page in self.pages)
        )
        if not self.pages:
            raise DocumentStructureError("a document needs at least one page")


def read_paged(data: bytes | BinaryIO, mode: SourceMode, doc_id: str = "doc") -> PagedDocument:
    """Split a UTF-8 byte stream into pages of raw lines.

    Pages are delimited by form feed; markdown mode also treats a full-line
    ``<!-- page: N -->`` comment as a break. Delimiters are consumed.
    """
    if not isinstance(data, bytes):
        data = data.read()
    text = data.decode("utf-8")
    text = text.replace("\r\n", "\n").replace("\r", "\n")

    pages: list[list[str]] = []
    for chunk in text.split("\f"):
        lines = chunk.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        if mode is SourceMode.MARKDOWN:
            current: list[str] = []
            pages.append(current)
            for line in lines:
                if PAGE_BREAK_COMMENT.match(line):
                    current = []
                    pages.append(current)
                else:
                    current.append(line)
        else:
            pages.append(lines)
    if not pages:
        raise DocumentStructureError("no pages found")
    return PagedDocument(doc_id=doc_id, pages=tuple(tuple(p) for p in pages), source_mode=mode)


def render_paged(doc: PagedDocument) -> str:
    """Serialize pages back to text, the inverse of read_paged.

    Markdown pages are separated by ``<!-- page: N -->`` comment lines,
    plaintext pages by form feeds. Exact round trip except for a trailing
    blank raw line on a non-final page, which read_paged folds away.
    """
    if doc.source_mode is SourceMode.MARKDOWN:
        parts: list[str] = []
        for number, page in enumerate(doc.pages, start=1):
            if number > 1:
                parts.append(f"<!-- page: {number} -->")
            parts.extend(page)
        return "\n".join(parts) + "\n"
    return "\f".join("\n".join(page) for page in doc.pages) + "\n"


def _heading_depth(line: str) -> int:
    depth = 0
    while depth < len(line) and line[depth] == "#":
        depth += 1
    if depth == 0 or depth >= len(line) or line[depth] != " ":
        return 0
    return depth


def to_units(doc: PagedDocument) -> list[TextUnit]:
    """One TextUnit per non-blank line, tagged with page coordinates.

    Blank lines are dropped before numbering, so line_index / page_line_count
    refer to the retained lines only. Markdown flags stay 0/false in
    plaintext mode.
    """
    is_md = doc.source_mode is SourceMode.MARKDOWN
    units: list[TextUnit] = []
    for page_no, page in enumerate(doc.pages, start=1):
        lines = [line.strip() for line in page]
        lines = [line for line in lines if line]
        for index, line in enumerate(lines):
            units.append(
                TextUnit(
                    text=line,
                    page=page_no,
                    line_index=index,
                    page_line_count=len(lines),
                    md_heading_depth=_heading_depth(line) if is_md else 0,
                    is_table_row=line.startswith("|") if is_md else False,
                )
            )
    return units


def roman_to_int(label: str) -> int | None:
    """Value of an uppercase roman numeral in I..XXXIX, else None."""
    total = 0
    previous = 0
    for char in reversed(label):
        value = _ROMAN_VALUES.get(char)
        if value is None:
            return None
        if value < previous:
            total -= value
        else:
            total += value
            previous = value
    if not 1 <= total <= 39:
        return None
    # Reject malformed spellings such as "IIII" or "VX".
    if int_to_roman(total) != label:
        return None
    return total


def int_to_roman(value: int) -> str:
    """Canonical roman spelling for 1..39."""
    if not 1 <= value <= 39:
        raise ValueError("roman labels are supported for 1..39 only")
    tens, rest = divmod(value, 10)
    ones = ["", "I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX"]
    return "X" * tens + ones[rest]


def parse_number_label(text: str) -> tuple[str, tuple[int, ...], str] | None:
    """Match a leading section label, returning (raw_label, path, rest).

    Tried in order: dotted-decimal, roman numeral, single capital letter.
    Returns None when the line does not open with a recognizable label.
    """
    match = _DOTTED_TITLE.match(text)
    if match:
        label = match.group(1)
        components = tuple(int(part) for part in label.split("."))
        if len(components) <= MAX_NUMBER_DEPTH:
            return label, components, match.group(2)
    match = _ROMAN_TITLE.match(text)
    if match:
        value = roman_to_int(match.group(1))
        if value is not None:
            return match.group(1), (value,), match.group(2)
    match = _ALPHA_TITLE.match(text)
    if match:
        letter = match.group(1)
        return letter, (ord(letter) - ord("A") + 1,), match.group(2)
    return None


def detect_title_plaintext(unit: TextUnit) -> SectionTitle | None:
    """Detect a section title in a plain-text line.

    Fires only when the line opens with a dotted-decimal number, a roman
    numeral, or a single capital letter, each followed by heading text; a
    number buried inside a sentence never matches.
    """
    parsed = parse_number_label(unit.text)
    if parsed is None:
        return None
    raw_label, path, rest = parsed
    return SectionTitle(
        raw_label=raw_label,
        canonical_path=path,
        heading=rest.strip(),
        synthesized=False,
    )
