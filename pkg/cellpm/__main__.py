#!/usr/bin/env python3
"""Entry point for the cellpm command line."""

import argparse
import sys
from typing import Any, Dict, List, Optional

from rich.console import Console

from cellpm.command_output import OutputFormatter
from cellpm.logger import setup_logging
from cellpm.service import CellpmService
from cellpm.version import __version__

# Speedup model constants exposed as --flags (flag, dest, type)
SPEEDUP_CONSTANTS = [
    ("--d", "d", int),
    ("--n-cell", "n_cell", int),
    ("--n-max", "n_max", float),
    ("--n-p-max", "n_p_max", float),
    ("--tau-i", "tau_i", float),
    ("--tau-e", "tau_e", float),
    ("--tau-f", "tau_f", float),
    ("--tau-eg", "tau_eg", float),
    ("--c-u", "c_u", float),
    ("--c-alpha", "c_alpha", float),
    ("--c-beta", "c_beta", float),
    ("--c-gamma", "c_gamma", float),
    ("--c-c", "c_c", float),
    ("--T", "T", int),
]


def setup_arg_parser() -> argparse.ArgumentParser:
    """Create and return the CLI argument parser."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Print the report as JSON.")
    common.add_argument("--log-level", help="Console log level (default from config).")

    parser = argparse.ArgumentParser(prog="cellpm")
    parser.add_argument(
        "--version",
        action="version",
        version=f"%(prog)s {__version__}",
        help="Show program version and exit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", parents=[common], help="Run an instance file.")
    run.add_argument("instance", help="Instance JSON file.")
    run.add_argument("--engine", choices=["seq", "par"])
    run.add_argument("--mode", choices=["reference", "concurrent"])
    run.add_argument("--out", help="Output directory.")
    run.add_argument("--trace", action="store_true", default=None)
    run.add_argument("--procs-view", dest="procs_view", action="store_true", default=None)
    run.add_argument("--max-iterations", dest="max_iterations", type=int)
    run.add_argument("--threads", type=int, help="Worker cap for concurrent mode.")

    verify = sub.add_parser("verify", parents=[common], help="Verify an instance or run a suite.")
    verify.add_argument("instance", nargs="?", help="Instance JSON file.")
    verify.add_argument("--suite", choices=["lemmas"])
    verify.add_argument("--max-cells", dest="max_cells", type=int)
    verify.add_argument("--dims", type=int, nargs="+")
    verify.add_argument("--seed", type=int)
    verify.add_argument("--trials", type=int)
    verify.add_argument("--tolerance", type=float)
    verify.add_argument("--mode", choices=["reference", "concurrent"])
    verify.add_argument("--max-iterations", dest="max_iterations", type=int)

    speedup = sub.add_parser("speedup", parents=[common], help="Emit a speedup curve as CSV.")
    speedup.add_argument("--model", required=True)
    speedup.add_argument("--sweep", required=True, help="a:b:step, b inclusive.")
    speedup.add_argument("--out", help="CSV output file.")
    for flag, dest, kind in SPEEDUP_CONSTANTS:
        speedup.add_argument(flag, dest=dest, type=kind)

    sub.add_parser("methods", parents=[common], help="List built-in methods.")
    sub.add_parser("help", parents=[common], help="List commands.")
    return parser


def command_kwargs(args: argparse.Namespace) -> Dict[str, Any]:
    """Command arguments from the parsed namespace, without CLI-only options."""
    skip = {"command", "json", "log_level"}
    return {k: v for k, v in vars(args).items() if k not in skip and v is not None}


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the exit code (0 ok, 1 failed check, 2 bad input)."""
    parser = setup_arg_parser()
    args = parser.parse_args(argv)
    setup_logging(level=args.log_level)

    result = CellpmService().execute_command(args.command, **command_kwargs(args))

    if args.json:
        print(OutputFormatter.dumps_json(result))
    else:
        OutputFormatter.display(args.command, result, Console())
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
