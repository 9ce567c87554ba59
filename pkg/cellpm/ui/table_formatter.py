"""
Table formatting utilities for console reports.

Thin helpers around rich tables so every report shares one look.
"""

import logging
from typing import Any, Callable, Dict, List, Optional, Union

from rich import box
from rich.console import Console
from rich.table import Table
from rich.text import Text

from cellpm.ui.theme import HEADER_STYLE, TABLE_BORDER_STYLE, TABLE_TITLE_STYLE

StyleSpec = Union[str, Callable[[Any], Optional[str]], None]


def create_table(
    title: Optional[str] = None,
    headers: Optional[List[str]] = None,
    show_lines: bool = False,
    column_alignments: Optional[Dict[str, str]] = None,
) -> Table:
    """
    Create a rich Table with consistent styling.

    Args:
        title: Optional title for the table
        headers: List of column headers
        show_lines: Whether to show lines between rows
        column_alignments: Optional dict mapping header names to "left", "center" or "right"
    """
    table = Table(
        title=title,
        show_lines=show_lines,
        box=box.ROUNDED,
        title_style=TABLE_TITLE_STYLE,
        border_style=TABLE_BORDER_STYLE,
        header_style=HEADER_STYLE,
    )
    for header in headers or []:
        justify = (column_alignments or {}).get(header, "left")
        if justify not in ("left", "center", "right"):
            justify = "left"
        table.add_column(header, justify=justify)  # type: ignore[arg-type]
    return table


def format_cell(value: Any, style: StyleSpec = None, none_display: str = "-") -> Text:
    """Format a cell value; a callable style is applied to the raw value."""
    if value is None:
        return Text(none_display, style="dim italic")
    applied = style
    if callable(style):
        try:
            applied = style(value)
        except Exception as e:
            logging.error(f"Error applying style function: {e}")
            applied = None
    if isinstance(value, float):
        value = f"{value:.6g}"
    return Text(str(value), style=applied)


def display_table(
    console: Console,
    data: List[Dict[str, Any]],
    columns: List[str],
    headers: Optional[List[str]] = None,
    title: Optional[str] = None,
    style_map: Optional[Dict[str, StyleSpec]] = None,
    column_alignments: Optional[Dict[str, str]] = None,
) -> None:
    """
    Create, populate and print a table in one operation.

    Args:
        console: Console to print on
        data: One dict per row
        columns: Keys to extract from each row dict
        headers: Column headers (defaults to columns)
        title: Optional table title
        style_map: Column name -> style or style function of the cell value
        column_alignments: Header name -> alignment
    """
    headers = headers or columns
    style_map = style_map or {}
    table = create_table(title=title, headers=headers, column_alignments=column_alignments)
    for row in data:
        table.add_row(*(format_cell(row.get(col), style_map.get(col)) for col in columns))
    console.print(table)
