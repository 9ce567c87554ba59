"""
Tests for help command handler.

Uses the real command registry; nothing to mock.
"""

from cellpm.commands.help import handle_command


def test_help_lists_every_command():
    """Test help returns every registered command in name order."""
    result = handle_command()

    assert result.success
    names = [c["name"] for c in result.data["commands"]]
    assert names == ["help", "methods", "run", "speedup", "verify"]


def test_help_includes_usage_lines():
    result = handle_command()
    usage = {c["name"]: c["usage"] for c in result.data["commands"]}
    assert usage["run"].startswith("Usage: cellpm run")
    assert usage["methods"] == "Usage: cellpm methods"
