"""
Colors and styles for cellpm reports.
"""

from typing import Dict

ERROR = "#FF504A"
SUCCESS = "#75c163"
WARNING = "#e5c07b"
TABLE_HEADER = "#54d3de"
TABLE_BORDER = "#00a0b2"
NEUTRAL = "white"
INACTIVE = "#C2CBD1"

HEADER_STYLE = "bold"
ERROR_STYLE = f"bold {ERROR}"
SUCCESS_STYLE = f"bold {SUCCESS}"
TABLE_TITLE_STYLE = f"bold {TABLE_HEADER}"
TABLE_BORDER_STYLE = TABLE_BORDER

# Outcome of a check, an equivalence comparison or an audit
STATUS_STYLES: Dict[str, str] = {
    "pass": SUCCESS,
    "ok": SUCCESS,
    "match": SUCCESS,
    "fail": ERROR,
    "mismatch": ERROR,
    "skipped": INACTIVE,
}


def get_status_style(status: str) -> str:
    """Style for a check outcome; unknown outcomes render neutral."""
    return STATUS_STYLES.get(status.lower(), NEUTRAL)


def pass_fail(ok: bool) -> str:
    return "pass" if ok else "fail"
