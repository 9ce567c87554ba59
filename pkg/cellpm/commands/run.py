"""
Command handler for running an instance file with either interpreter.

Writes the canonical final state, a JSON run report and, for the
distributed engine, the communication audit CSV.
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

from cellpm.cell_grid import DistributedState, distribute_initial, grid_for
from cellpm.command_registry import CommandDefinition
from cellpm.config import get_output_dir
from cellpm.exceptions import ParticleMethodError
from cellpm.interpreter import run_traced
from cellpm.model import Instance, State
from cellpm.runtime import ExecMode, audit_communications, parallel_run_traced
from cellpm.serialization import (
    load_instance,
    state_digest,
    write_json,
    write_state,
    write_trace,
)

from .base import CommandResult


def storage_view(state: DistributedState) -> List[Dict[str, Any]]:
    """Particle count of every compartment, per process."""
    return [
        {
            "process": w,
            "center": len(storage.center),
            "compartments": list(storage.compartment_sizes()),
        }
        for w, storage in enumerate(state.storages, start=1)
    ]


def _failure_details(e: ParticleMethodError) -> Dict[str, Any]:
    return {
        key: getattr(e, key)
        for key in ("constraint", "particle_id", "step", "field", "iterations")
        if getattr(e, key, None) is not None
    }


def _run_sequential(instance: Instance, max_iterations: Optional[int]) -> Dict[str, Any]:
    trajectory = run_traced(instance, max_iterations=max_iterations)
    return {
        "final": trajectory.final,
        "T": trajectory.T,
        "timings": [{"step": seconds} for seconds in trajectory.timings],
        "states": trajectory.states,
        "comm_log": None,
    }


def _run_distributed(
    instance: Instance,
    mode: str,
    max_iterations: Optional[int],
    keep_states: bool,
    threads: Optional[int],
) -> Dict[str, Any]:
    trajectory = parallel_run_traced(
        instance,
        grid_for(instance),
        ExecMode(mode),
        max_iterations=max_iterations,
        keep_states=keep_states,
        max_workers=threads,
    )
    return {
        "final": trajectory.final,
        "T": trajectory.T,
        "timings": list(trajectory.timings),
        "states": trajectory.states,
        "comm_log": trajectory.comm_log,
    }


def handle_command(**kwargs: Any) -> CommandResult:
    """
    Run an instance file to its final state.

    Args:
        **kwargs: Command parameters
            - instance: path of the instance JSON file
            - engine: "seq" or "par" (default "seq")
            - mode: "reference" or "concurrent" for the distributed engine
            - out: output directory (defaults to the configured output_dir)
            - trace: also write every visited state to trace.jsonl
            - procs_view: include the per-process storage view in the result
            - max_iterations: override of the non-termination guard
            - threads: worker cap for concurrent mode
    """
    path = kwargs["instance"]
    engine = kwargs.get("engine", "seq")
    mode = kwargs.get("mode", ExecMode.REFERENCE.value)
    out_dir = Path(kwargs.get("out") or get_output_dir())
    trace = bool(kwargs.get("trace", False))
    procs_view = bool(kwargs.get("procs_view", False))

    try:
        instance = load_instance(path)
        logging.info(f"Running {path} with engine={engine} mode={mode}")
        if engine == "par":
            outcome = _run_distributed(
                instance, mode, kwargs.get("max_iterations"), trace, kwargs.get("threads")
            )
        else:
            outcome = _run_sequential(instance, kwargs.get("max_iterations"))
    except ParticleMethodError as e:
        logging.error(f"Run of {path} failed: {e}")
        return CommandResult(
            False,
            data={"instance": str(path), **_failure_details(e)},
            message=f"Run failed: {e}",
            error=e,
        )

    final = outcome["final"]
    digest = state_digest(final)
    particles = (
        final.center_particles() if isinstance(final, DistributedState) else final.particles
    )
    files = {
        "final_state": str(write_state(out_dir / "final_state.json", final)),
    }
    report: Dict[str, Any] = {
        "instance": str(path),
        "method": instance.method.name,
        "engine": engine,
        "mode": mode if engine == "par" else None,
        "digest": digest,
        "T": outcome["T"],
        "t": final.g.t,
        "particle_count": len(particles),
        "timings": outcome["timings"],
    }

    comm_log = outcome["comm_log"]
    if comm_log is not None:
        csv_path = out_dir / "comm_audit.csv"
        comm_log.write_csv(str(csv_path))
        files["comm_audit"] = str(csv_path)
        report["audit"] = audit_communications(comm_log.events).to_dict()

    if trace:
        files["trace"] = str(write_trace(out_dir / "trace.jsonl", outcome["states"]))

    if procs_view:
        if isinstance(final, DistributedState):
            distributed = final
        else:
            distributed = distribute_initial(
                Instance(state=State(g=final.g, particles=final.particles), method=instance.method),
                grid_for(instance),
            )
        report["procs"] = storage_view(distributed)

    report["files"] = files
    write_json(out_dir / "report.json", report)
    files["report"] = str(out_dir / "report.json")
    logging.info(f"Run finished: T={report['T']} digest={digest}")

    return CommandResult(
        True,
        data=report,
        message=f"Final state after T={report['T']} states written to {files['final_state']}",
    )


DEFINITION = CommandDefinition(
    name="run",
    description="Run an instance file with the sequential or the distributed interpreter",
    handler=handle_command,
    parameters={
        "instance": {"type": "string", "description": "Path of the instance JSON file"},
        "engine": {
            "type": "string",
            "enum": ["seq", "par"],
            "default": "seq",
            "description": "Sequential (seq) or distributed (par) interpreter",
        },
        "mode": {
            "type": "string",
            "enum": [m.value for m in ExecMode],
            "default": ExecMode.REFERENCE.value,
            "description": "Execution mode of the distributed interpreter",
        },
        "out": {"type": "string", "description": "Output directory"},
        "trace": {
            "type": "boolean",
            "default": False,
            "description": "Write every visited state to trace.jsonl",
        },
        "procs_view": {
            "type": "boolean",
            "default": False,
            "description": "Show the particle count of every compartment per process",
        },
        "max_iterations": {"type": "integer", "minimum": 1},
        "threads": {"type": "integer", "minimum": 1},
    },
    required_params=["instance"],
    usage_hint="Usage: cellpm run <instance.json> [--engine seq|par] [--mode reference|concurrent] [--out DIR] [--trace] [--procs-view]",
)
