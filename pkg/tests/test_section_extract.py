"""Title parsing, tuple assembly, preamble and synthesized numbering, rows."""

import pytest

from rexcl.ingest import PagedDocument, SourceMode, to_units
from rexcl.model import (
    ExtractionResult,
    RowKind,
    SectionTitle,
    SectionTuple,
    TextUnit,
)
from rexcl.section_extract import (
    PREAMBLE_HEADING,
    NumberingError,
    assemble,
    parse_section_title_md,
    to_rows,
)


def md_units(*lines: str) -> list[TextUnit]:
    doc = PagedDocument("doc", (tuple(lines),), SourceMode.MARKDOWN)
    return to_units(doc)


def txt_units(*lines: str) -> list[TextUnit]:
    doc = PagedDocument("doc", (tuple(lines),), SourceMode.PLAINTEXT)
    return to_units(doc)


def shapes(extraction: ExtractionResult) -> list[tuple[tuple[int, ...], str, tuple[str, ...]]]:
    return [
        (t.title.canonical_path, t.title.heading, t.texts) for t in extraction.tuples
    ]


class TestParseSectionTitleMd:
    def test_numbered_heading(self):
        (u,) = md_units("# 1.1 Main Task")
        title = parse_section_title_md(u)
        assert title is not None and not title.synthesized
        assert (title.raw_label, title.canonical_path, title.heading) == (
            "1.1",
            (1, 1),
            "Main Task",
        )

    def test_non_heading_is_none(self):
        (u,) = md_units("plain body line")
        assert parse_section_title_md(u) is None

    def test_bold_markers_retained(self):
        (u,) = md_units("## 2.3.1 **Use Case**")
        title = parse_section_title_md(u)
        assert title is not None
        assert title.canonical_path == (2, 3, 1)
        assert title.heading == "**Use Case**"

    def test_unnumbered_heading_is_synthesized(self):
        (u,) = md_units("# Introduction")
        title = parse_section_title_md(u)
        assert title is not None and title.synthesized
        assert title.canonical_path == ()
        assert title.heading == "Introduction"

    def test_roman_numbered_heading(self):
        (u,) = md_units("## IV. Security")
        title = parse_section_title_md(u)
        assert title is not None and title.canonical_path == (4,)


class TestAssemble:
    def test_titles_own_following_texts(self):
        extraction = assemble(
            md_units("# 1 A", "t1", "t2", "# 2 B", "t3"), SourceMode.MARKDOWN
        )
        assert shapes(extraction) == [
            ((1,), "A", ("t1", "t2")),
            ((2,), "B", ("t3",)),
        ]

    def test_empty_input(self):
        extraction = assemble([], SourceMode.MARKDOWN)
        assert extraction.tuples == ()

    def test_preamble_collects_leading_texts(self):
        extraction = assemble(md_units("body only"), SourceMode.MARKDOWN)
        assert shapes(extraction) == [((0,), PREAMBLE_HEADING, ("body only",))]
        assert extraction.tuples[0].title.synthesized

    def test_synthesized_title_gets_child_path(self):
        extraction = assemble(md_units("# 1 A", "## X", "t"), SourceMode.MARKDOWN)
        assert shapes(extraction) == [
            ((1,), "A", ()),
            ((1, 1), "X", ("t",)),
        ]

    def test_synthesized_siblings_count_up(self):
        extraction = assemble(
            md_units("# 1 A", "## X", "## Y", "# Z"), SourceMode.MARKDOWN
        )
        assert [t.title.canonical_path for t in extraction.tuples] == [
            (1,),
            (1, 1),
            (1, 2),
            (2,),
        ]

    def test_synthesized_skips_taken_ordinals(self):
        extraction = assemble(
            md_units("# 1 A", "## 1.1 Named", "## Unnamed"), SourceMode.MARKDOWN
        )
        assert [t.title.canonical_path for t in extraction.tuples] == [
            (1,),
            (1, 1),
            (1, 2),
        ]

    def test_plaintext_uses_line_grammar(self):
        extraction = assemble(
            txt_units("1 Scope", "the scope text", "2 References", "IV. Security"),
            SourceMode.PLAINTEXT,
        )
        assert shapes(extraction) == [
            ((1,), "Scope", ("the scope text",)),
            ((2,), "References", ()),
            ((4,), "Security", ()),
        ]

    def test_plain_numbered_line_is_not_a_title_in_markdown(self):
        extraction = assemble(md_units("# 1 A", "3.4 looks like a title"), SourceMode.MARKDOWN)
        assert shapes(extraction) == [((1,), "A", ("3.4 looks like a title",))]

    def test_content_conservation(self):
        units = md_units("intro text", "# 1 A", "t1", "|a|b|", "# Untitled", "t2")
        extraction = assemble(units, SourceMode.MARKDOWN)
        headings = [t.title.heading for t in extraction.tuples if not t.title.synthesized]
        synthesized = [t.title.heading for t in extraction.tuples if t.title.synthesized]
        texts = [text for t in extraction.tuples for text in t.texts]
        assert sorted(texts) == sorted(["intro text", "t1", "|a|b|", "t2"])
        assert headings == ["A"]
        assert synthesized == [PREAMBLE_HEADING, "Untitled"]

    def test_removed_units_carried_through(self):
        removed = (TextUnit(text="footer", page=1, line_index=0, page_line_count=1),)
        extraction = assemble(md_units("# 1 A"), SourceMode.MARKDOWN, removed_units=removed)
        assert extraction.removed_units == removed


def section(path, heading, texts=(), synthesized=False):
    return SectionTuple(
        title=SectionTitle(
            raw_label="" if synthesized else ".".join(map(str, path)),
            canonical_path=tuple(path),
            heading=heading,
            synthesized=synthesized,
        ),
        texts=tuple(texts),
    )


class TestToRows:
    def test_texts_extend_section_number(self):
        extraction = ExtractionResult(
            doc_id="D1", tuples=(section((1, 1), "Main Task", ("t1", "t2")),)
        )
        rows = to_rows(extraction)
        assert [(r.object_number, r.kind, r.object_level) for r in rows] == [
            ("1.1", RowKind.TITLE, 2),
            ("1.1.1", RowKind.TEXT, 3),
            ("1.1.2", RowKind.TEXT, 3),
        ]
        assert rows[0].object_heading == "Main Task"
        assert [r.object_text for r in rows[1:]] == ["t1", "t2"]

    def test_empty_extraction(self):
        assert to_rows(ExtractionResult(doc_id="D1")) == []

    def test_textless_sections_yield_title_rows_only(self):
        extraction = ExtractionResult(
            doc_id="D1",
            tuples=(section((1,), "A"), section((2,), "B"), section((3,), "C")),
        )
        rows = to_rows(extraction)
        assert len(rows) == 3
        assert all(r.kind is RowKind.TITLE for r in rows)

    def test_identifiers_are_sequential(self):
        extraction = ExtractionResult(
            doc_id="D1",
            tuples=(section((1,), "A", ("x",)), section((2,), "B", ("y", "z"))),
        )
        rows = to_rows(extraction)
        assert [r.object_identifier for r in rows] == [
            f"D1-R{i:05d}" for i in range(1, 6)
        ]

    def test_duplicate_numbers_rejected(self):
        extraction = ExtractionResult(
            doc_id="D1", tuples=(section((1,), "First"), section((1,), "Second"))
        )
        with pytest.raises(NumberingError) as err:
            to_rows(extraction)
        assert err.value.collisions == [("1", ["First", "Second"])]
        assert "First" in str(err.value) and "Second" in str(err.value)

    def test_pipeline_counts(self):
        extraction = assemble(
            md_units("pre", "# 1 A", "t1", "t2", "## 1.1 B", "t3"), SourceMode.MARKDOWN
        )
        rows = to_rows(extraction)
        titles = [r for r in rows if r.kind is RowKind.TITLE]
        texts = [r for r in rows if r.kind is RowKind.TEXT]
        assert len(titles) == len(extraction.tuples)
        assert len(texts) == sum(len(t.texts) for t in extraction.tuples)
