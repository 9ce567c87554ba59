"""Tests for the shared table helpers."""

import io

from rich.console import Console

from cellpm.ui.table_formatter import create_table, display_table, format_cell


def test_create_table_alignments():
    table = create_table(
        title="t", headers=["A", "B"], column_alignments={"B": "right", "A": "sideways"}
    )
    assert [c.justify for c in table.columns] == ["left", "right"]


def test_format_cell_style_function_errors_fall_back():
    def broken(value):
        raise KeyError(value)

    cell = format_cell("x", broken)
    assert cell.plain == "x"
    assert not cell.style


def test_display_table_prints_rows_and_missing_values():
    buffer = io.StringIO()
    console = Console(file=buffer, width=120, color_system=None)
    display_table(
        console,
        [{"name": "alpha", "value": 0.5}, {"name": "beta"}],
        ["name", "value"],
        ["Name", "Value"],
        "Sample",
    )
    text = buffer.getvalue()
    assert "Sample" in text
    assert "alpha" in text
    assert "0.5" in text
    assert "-" in text
