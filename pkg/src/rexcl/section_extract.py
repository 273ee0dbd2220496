"""Section title parsing, tuple assembly, and tabular row generation."""

from __future__ import annotations

from .ingest import SourceMode, detect_title_plaintext, parse_number_label
from .model import (
    ExtractionResult,
    RequirementRow,
    ReviewState,
    RowKind,
    SectionTitle,
    SectionTuple,
    TextUnit,
    object_identifier,
    render_number,
)

PREAMBLE_HEADING = "(preamble)"


class NumberingError(ValueError):
    """Duplicate section numbers detected while generating rows."""

    def __init__(self, collisions: list[tuple[str, list[str]]]):
        self.collisions = collisions
        described = "; ".join(
            f"{number} used by {', '.join(headings)}" for number, headings in collisions
        )
        super().__init__(f"duplicate section numbers: {described}")


def parse_section_title_md(unit: TextUnit) -> SectionTitle | None:
    """Parse a markdown heading into a section title.

    The "#" run and surrounding whitespace are consumed; the remainder goes
    through the same number grammar as plain-text detection. Headings without
    a parsable number come back synthesized with an empty path, to be
    numbered during assembly.
    """
    if unit.md_heading_depth == 0:
        return None
    remainder = unit.text[unit.md_heading_depth :].strip()
    parsed = parse_number_label(remainder)
    if parsed is not None:
        raw_label, path, rest = parsed
        return SectionTitle(
            raw_label=raw_label,
            canonical_path=path,
            heading=rest.strip(),
            synthesized=False,
        )
    return SectionTitle(
        raw_label="",
        canonical_path=(),
        heading=remainder,
        synthesized=True,
    )


def _next_sibling_path(
    parent: tuple[int, ...], seen_paths: list[tuple[int, ...]]
) -> tuple[int, ...]:
    depth = len(parent) + 1
    ordinals = [
        path[-1]
        for path in seen_paths
        if len(path) == depth and path[:-1] == parent
    ]
    return parent + (max(ordinals, default=0) + 1,)


def assemble(
    units: list[TextUnit],
    mode: SourceMode,
    doc_id: str = "doc",
    removed_units: tuple[TextUnit, ...] = (),
) -> ExtractionResult:
    """Group HF-filtered units into section tuples, in document order.

    Every title opens a tuple; other units append to the open tuple's texts.
    Units before the first title land in a "(preamble)" tuple. Titles that
    arrived without a number get parent-path + next-sibling-ordinal numbering,
    the parent being the nearest earlier title of smaller heading depth.
    """
    detect = (
        parse_section_title_md if mode is SourceMode.MARKDOWN else detect_title_plaintext
    )

    tuples: list[tuple[SectionTitle, list[str]]] = []
    # (heading depth, path) per emitted title, in document order.
    title_stack: list[tuple[int, tuple[int, ...]]] = []
    seen_paths: list[tuple[int, ...]] = []

    def open_tuple(title: SectionTitle, depth: int) -> None:
        title_stack.append((depth, title.canonical_path))
        seen_paths.append(title.canonical_path)
        tuples.append((title, []))

    for unit in units:
        title = detect(unit)
        if title is None:
            if not tuples:
                preamble = SectionTitle(
                    raw_label="",
                    canonical_path=(0,),
                    heading=PREAMBLE_HEADING,
                    synthesized=True,
                )
                open_tuple(preamble, 0)
            tuples[-1][1].append(unit.text)
            continue

        depth = unit.md_heading_depth or len(title.canonical_path)
        if title.synthesized:
            parent: tuple[int, ...] = ()
            for earlier_depth, earlier_path in reversed(title_stack):
                if earlier_depth < depth:
                    parent = earlier_path
                    break
            path = _next_sibling_path(parent, seen_paths)
            title = SectionTitle(
                raw_label="",
                canonical_path=path,
                heading=title.heading,
                synthesized=True,
            )
        open_tuple(title, depth)

    return ExtractionResult(
        doc_id=doc_id,
        tuples=tuple(SectionTuple(title=t, texts=tuple(texts)) for t, texts in tuples),
        removed_units=removed_units,
    )


def to_rows(extraction: ExtractionResult) -> list[RequirementRow]:
    """Render section tuples into numbered TITLE and TEXT rows.

    Each text row's number extends its section's number by its 1-based
    position, per the deployment schema.
    """
    numbers_seen: dict[str, list[str]] = {}
    for section in extraction.tuples:
        number = render_number(section.title.canonical_path)
        numbers_seen.setdefault(number, []).append(section.title.heading)
    collisions = [
        (number, headings)
        for number, headings in numbers_seen.items()
        if len(headings) > 1
    ]
    if collisions:
        raise NumberingError(collisions)

    rows: list[RequirementRow] = []
    ordinal = 1
    for section in extraction.tuples:
        path = section.title.canonical_path
        number = render_number(path)
        rows.append(
            RequirementRow(
                object_identifier=object_identifier(extraction.doc_id, ordinal),
                object_number=number,
                object_heading=section.title.heading,
                object_text="",
                object_level=len(path),
                kind=RowKind.TITLE,
                review_state=ReviewState.UNREVIEWED,
            )
        )
        ordinal += 1
        for position, text in enumerate(section.texts, start=1):
            extended = render_number(path + (position,))
            rows.append(
                RequirementRow(
                    object_identifier=object_identifier(extraction.doc_id, ordinal),
                    object_number=extended,
                    object_heading="",
                    object_text=text,
                    object_level=len(path) + 1,
                    kind=RowKind.TEXT,
                    review_state=ReviewState.UNREVIEWED,
                )
            )
            ordinal += 1
    return rows
