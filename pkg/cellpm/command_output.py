"""
Command output handling for the CLI.

Results are rendered as rich tables for people, or as one JSON document when
the caller asks for machine-readable output.
"""

import json
from typing import Any, Dict

from rich.console import Console

from cellpm.commands.base import CommandResult
from cellpm.ui.table_formatter import display_table
from cellpm.ui.theme import (
    ERROR_STYLE,
    SUCCESS_STYLE,
    WARNING,
    get_status_style,
    pass_fail,
)


class OutputFormatter:
    """Format command results for the console or as JSON."""

    @staticmethod
    def format_json(result: CommandResult) -> Dict[str, Any]:
        """JSON document of a result: success flag, message, data and error."""
        document: Dict[str, Any] = {"success": result.success}
        if result.message:
            document["message"] = result.message
        if isinstance(result.data, dict):
            document.update({k: v for k, v in result.data.items() if k != "csv"})
        elif result.data is not None:
            document["data"] = result.data
        if result.error is not None:
            document["error"] = str(result.error)
        return document

    @staticmethod
    def dumps_json(result: CommandResult) -> str:
        return json.dumps(OutputFormatter.format_json(result), indent=2, default=str)

    @classmethod
    def display(cls, command_name: str, result: CommandResult, console: Console) -> None:
        """Print a result with the display routine of its command."""
        data = result.data if isinstance(result.data, dict) else {}
        display = {
            "run": cls._display_run,
            "verify": cls._display_verify,
            "speedup": cls._display_speedup,
            "methods": cls._display_methods,
            "help": cls._display_help,
        }.get(command_name)

        if display and data:
            display(data, console)
        if result.message:
            style = SUCCESS_STYLE if result.success else ERROR_STYLE
            console.print(f"[{style}]{result.message}[/{style}]")

    # --- Helper methods for specific command output formatting ---

    @staticmethod
    def _display_run(data: Dict[str, Any], console: Console) -> None:
        if "digest" not in data:
            details = [{"field": k, "value": v} for k, v in data.items()]
            display_table(console, details, ["field", "value"], ["Field", "Value"], "Run failure")
            return

        summary = [
            {"setting": "Method", "value": data.get("method")},
            {"setting": "Engine", "value": data.get("engine")},
            {"setting": "Mode", "value": data.get("mode")},
            {"setting": "T", "value": data.get("T")},
            {"setting": "Final t", "value": data.get("t")},
            {"setting": "Particles", "value": data.get("particle_count")},
            {"setting": "Digest", "value": data.get("digest")},
        ]
        audit = data.get("audit")
        if audit:
            summary.append(
                {
                    "setting": "Communication audit",
                    "value": f"{pass_fail(audit['ok'])} ({audit['events']} pulls)",
                }
            )
        for name, path in data.get("files", {}).items():
            summary.append({"setting": f"File: {name}", "value": path})
        display_table(console, summary, ["setting", "value"], ["Setting", "Value"], "Run")

        timings = data.get("timings") or []
        if timings:
            totals: Dict[str, float] = {}
            for step_timings in timings:
                for stage, seconds in step_timings.items():
                    totals[stage] = totals.get(stage, 0.0) + seconds
            display_table(
                console,
                [{"stage": k, "seconds": v} for k, v in totals.items()],
                ["stage", "seconds"],
                ["Stage", "Seconds (informational)"],
                "Timings",
                column_alignments={"Seconds (informational)": "right"},
            )

        procs = data.get("procs")
        if procs:
            rows = [
                {
                    "process": p["process"],
                    "center": p["center"],
                    "compartments": " ".join(str(n) for n in p["compartments"]),
                }
                for p in procs
            ]
            display_table(
                console,
                rows,
                ["process", "center", "compartments"],
                ["Process", "Center", "Compartment sizes"],
                "Process storages",
            )

    @staticmethod
    def _display_lemmas(data: Dict[str, Any], console: Console) -> None:
        rows = [
            {
                "name": lemma["name"],
                "checked": lemma["checked"],
                "failures": lemma["failure_count"],
                "status": pass_fail(lemma["ok"]),
            }
            for lemma in data.get("lemmas", [])
        ]
        display_table(
            console,
            rows,
            ["name", "checked", "failures", "status"],
            ["Check", "Checked", "Failures", "Status"],
            f"Lemma suite ({data.get('shapes')} shapes, max_cells={data.get('max_cells')})",
            style_map={"status": get_status_style},
        )
        for lemma in data.get("lemmas", []):
            for failure in lemma["failures"]:
                console.print(f"[{WARNING}]{lemma['name']}: {failure}[/{WARNING}]")

    @classmethod
    def _display_verify(cls, data: Dict[str, Any], console: Console) -> None:
        if data.get("suite") == "lemmas":
            cls._display_lemmas(data, console)
            return
        if "equivalence" not in data:
            details = [{"field": k, "value": v} for k, v in data.items()]
            display_table(console, details, ["field", "value"], ["Field", "Value"], "Verification")
            return

        equivalence = data["equivalence"]
        rows = [
            {
                "check": "Equivalence",
                "status": pass_fail(equivalence["match"]),
                "detail": f"T_seq={equivalence['T_seq']} T_par={equivalence['T_par']}, "
                f"{len(equivalence['particle_diff'])} particle differences",
            },
            {
                "check": "Communication audit",
                "status": pass_fail(data["audit"]["ok"]),
                "detail": f"{data['audit']['events']} pulls in {data['audit']['phases']} phases",
            },
            {
                "check": "Motion constraints",
                "status": pass_fail(data["motion"]["ok"]),
                "detail": f"{len(data['motion']['violations'])} violations",
            },
            {
                "check": "Interaction laws",
                "status": pass_fail(data["laws"]["ok"]),
                "detail": f"{data['laws']['trials']} trials, "
                f"{len(data['laws']['counterexamples'])} counterexamples",
            },
        ]
        display_table(
            console,
            rows,
            ["check", "status", "detail"],
            ["Check", "Status", "Detail"],
            f"Verification of {data.get('method')}",
            style_map={"status": get_status_style},
        )
        diffs = equivalence["particle_diff"][:10]
        if diffs:
            display_table(
                console,
                diffs,
                ["id", "field", "seq", "par"],
                ["Id", "Field", "Sequential", "Distributed"],
                "First particle differences",
            )

    @staticmethod
    def _display_speedup(data: Dict[str, Any], console: Console) -> None:
        rows = data.get("rows", [])
        shown = rows if len(rows) <= 20 else rows[:10] + rows[-10:]
        display_table(
            console,
            shown,
            ["x", "speedup"],
            [data.get("x_label", "x"), "Speedup"],
            f"{data.get('model')} speedup"
            + ("" if shown is rows else f" (first and last 10 of {len(rows)})"),
            column_alignments={"Speedup": "right"},
        )
        continuity = data.get("continuity")
        if continuity and not continuity["agree"]:
            console.print(
                f"[{WARNING}]Work-count branches disagree at n_CPU={continuity['n_cpu']}: "
                f"{continuity['xi_calc']} {continuity['xi_com']}[/{WARNING}]"
            )

    @staticmethod
    def _display_methods(data: Dict[str, Any], console: Console) -> None:
        rows = [
            {
                "name": m["name"],
                "exact": "yes" if m["exact"] else "no",
                "props": ", ".join(m["props"]),
                "parameters": ", ".join(
                    f"{name}={spec.get('default', '-')}" for name, spec in m["parameters"].items()
                ),
                "description": m["description"],
            }
            for m in data.get("methods", [])
        ]
        display_table(
            console,
            rows,
            ["name", "exact", "props", "parameters", "description"],
            ["Method", "Exact", "Properties", "Parameters", "Description"],
            "Built-in methods",
        )

    @staticmethod
    def _display_help(data: Dict[str, Any], console: Console) -> None:
        display_table(
            console,
            data.get("commands", []),
            ["name", "description", "usage"],
            ["Command", "Description", "Usage"],
            "cellpm commands",
        )
