"""CSV/JSON/YAML writing, parsing, and round-trip identity."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rexcl.export import CSV_COLUMNS, ExportFormat, ParseError, read, write
from rexcl.model import ClassLabel, RequirementRow, ReviewState, RowKind, render_number

HEADER_LINE = b"Object Identifier,Object Number,Object Heading,Object Text,Object Level,Object Type"

field_text = st.text(max_size=25)
# CSV export rejects NUL characters; JSON and YAML carry them.
csv_text = field_text.filter(lambda s: "\x00" not in s)
paths = st.lists(st.integers(min_value=0, max_value=99), min_size=1, max_size=4)
labels = st.sampled_from(list(ClassLabel))


@st.composite
def csv_rows(draw):
    """Rows expressible in the six CSV columns (default review fields)."""
    path = draw(paths)
    is_title = draw(st.booleans())
    return RequirementRow(
        object_identifier=draw(csv_text),
        object_number=render_number(path),
        object_heading=draw(csv_text.filter(bool)) if is_title else "",
        object_text="" if is_title else draw(csv_text.filter(bool)),
        object_level=len(path),
        kind=RowKind.TITLE if is_title else RowKind.TEXT,
        object_type=draw(st.none() | labels),
    )


@st.composite
def full_rows(draw):
    """Rows with review state, confidence, and corrections filled in."""
    path = draw(paths)
    is_title = draw(st.booleans())
    state = draw(st.sampled_from(list(ReviewState)))
    return RequirementRow(
        object_identifier=draw(field_text),
        object_number=render_number(path),
        object_heading=draw(field_text.filter(bool)) if is_title else "",
        object_text="" if is_title else draw(field_text.filter(bool)),
        object_level=len(path),
        kind=RowKind.TITLE if is_title else RowKind.TEXT,
        object_type=draw(st.none() | labels),
        confidence=draw(st.none() | st.floats(min_value=0, max_value=1, allow_nan=False)),
        review_state=state,
        corrected_type=draw(labels) if state is ReviewState.CORRECTED else None,
    )


def title_row():
    return RequirementRow(
        object_identifier="D1-R00001",
        object_number="1.1",
        object_heading="Main Task",
        object_text="",
        object_level=2,
        kind=RowKind.TITLE,
        object_type=ClassLabel.HEADER,
        confidence=0.9,
    )


class TestWriteCsv:
    def test_empty_rows_yield_header_only(self):
        assert write([], ExportFormat.CSV) == HEADER_LINE + b"\n"

    def test_title_row_record(self):
        data = write([title_row()], ExportFormat.CSV)
        assert data == HEADER_LINE + b"\nD1-R00001,1.1,Main Task,,2,HEADER\n"

    def test_rfc4180_quoting(self):
        row = RequirementRow(
            object_identifier="D1-R00002",
            object_number="1.1.1",
            object_heading="",
            object_text='a,"b"',
            object_level=3,
            kind=RowKind.TEXT,
        )
        data = write([row], ExportFormat.CSV).decode()
        assert '"a,""b"""' in data

    def test_corrected_type_wins_the_type_column(self):
        row = RequirementRow(
            object_identifier="D1-R00001",
            object_number="1",
            object_heading="",
            object_text="the body",
            object_level=1,
            kind=RowKind.TEXT,
            object_type=ClassLabel.FUNC_REQ,
            review_state=ReviewState.CORRECTED,
            corrected_type=ClassLabel.NON_FUNC_REQ,
        )
        record = write([row], ExportFormat.CSV).decode().splitlines()[1]
        assert record.endswith(",NON_FUNC_REQ")

    def test_bare_carriage_return_is_quoted_and_round_trips(self):
        row = RequirementRow(
            object_identifier="D1-R00003",
            object_number="2",
            object_heading="",
            object_text="split\rbody",
            object_level=1,
            kind=RowKind.TEXT,
        )
        data = write([row], ExportFormat.CSV)
        assert b'"split\rbody"' in data
        assert read(data, ExportFormat.CSV) == [row]

    def test_nul_character_rejected(self):
        row = RequirementRow(
            object_identifier="D1-R00004",
            object_number="3",
            object_heading="",
            object_text="nul\x00body",
            object_level=1,
            kind=RowKind.TEXT,
        )
        with pytest.raises(ValueError, match="NUL"):
            write([row], ExportFormat.CSV)
        for fmt in (ExportFormat.JSON, ExportFormat.YAML):
            assert read(write([row], fmt), fmt) == [row]

    def test_byte_deterministic(self):
        rows = [title_row()]
        for fmt in ExportFormat:
            assert write(rows, fmt) == write(rows, fmt)


class TestRoundTrips:
    @given(st.lists(csv_rows(), max_size=6))
    def test_csv(self, rows):
        assert read(write(rows, ExportFormat.CSV), ExportFormat.CSV) == rows

    @given(st.lists(full_rows(), max_size=6))
    def test_json(self, rows):
        assert read(write(rows, ExportFormat.JSON), ExportFormat.JSON) == rows

    @given(st.lists(full_rows(), max_size=6))
    def test_yaml(self, rows):
        assert read(write(rows, ExportFormat.YAML), ExportFormat.YAML) == rows

    @given(st.lists(full_rows(), max_size=6))
    def test_json_yaml_equivalence(self, rows):
        from_json = read(write(rows, ExportFormat.JSON), ExportFormat.JSON)
        from_yaml = read(write(rows, ExportFormat.YAML), ExportFormat.YAML)
        assert from_json == from_yaml


class TestReadErrors:
    def test_missing_csv_column_is_named(self):
        data = write([title_row()], ExportFormat.CSV).decode()
        lines = data.splitlines()
        lines[0] = lines[0].replace(",Object Level", "")
        broken = ("\n".join(lines) + "\n").encode()
        with pytest.raises(ParseError, match="Object Level") as err:
            read(broken, ExportFormat.CSV)
        assert err.value.field == "Object Level"

    def test_csv_header_required(self):
        with pytest.raises(ParseError, match="header"):
            read(b"", ExportFormat.CSV)

    def test_csv_field_count_checked(self):
        broken = HEADER_LINE + b"\nD1-R00001,1.1,Main Task,,2\n"
        with pytest.raises(ParseError, match="line 2"):
            read(broken, ExportFormat.CSV)

    def test_csv_level_must_be_integer(self):
        broken = HEADER_LINE + b"\nD1-R00001,1.1,Main Task,,x,HEADER\n"
        with pytest.raises(ParseError, match="Object Level"):
            read(broken, ExportFormat.CSV)

    def test_csv_unknown_type_rejected(self):
        broken = HEADER_LINE + b"\nD1-R00001,1.1,Main Task,,2,WISH\n"
        with pytest.raises(ParseError, match="WISH"):
            read(broken, ExportFormat.CSV)

    def test_csv_level_number_mismatch_rejected(self):
        broken = HEADER_LINE + b"\nD1-R00001,1.1,Main Task,,3,HEADER\n"
        with pytest.raises(ParseError, match="line 2"):
            read(broken, ExportFormat.CSV)

    def test_json_missing_field_is_named(self):
        record = (
            b'[{"object_identifier": "D1-R00001", "object_number": "1",'
            b' "object_heading": "", "object_text": "body", "object_level": 1,'
            b' "object_type": null, "confidence": null,'
            b' "review_state": "UNREVIEWED", "corrected_type": null}]'
        )
        with pytest.raises(ParseError, match="kind"):
            read(record, ExportFormat.JSON)

    def test_json_top_level_must_be_list(self):
        with pytest.raises(ParseError, match="list"):
            read(b'{"rows": []}', ExportFormat.JSON)

    def test_json_syntax_error_wrapped(self):
        with pytest.raises(ParseError, match="invalid JSON"):
            read(b"{nope", ExportFormat.JSON)

    def test_empty_yaml_is_empty_rows(self):
        assert read(b"", ExportFormat.YAML) == []
