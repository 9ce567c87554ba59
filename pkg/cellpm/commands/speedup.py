"""
Command handler for speedup tables of the complexity model.
"""

import logging
from pathlib import Path
from typing import Any, List

import numpy as np
from pydantic import ValidationError

from cellpm.command_registry import CommandDefinition
from cellpm.complexity import (
    SPEEDUP_MODELS,
    ComplexityParams,
    branch_continuity,
    processor_assignment,
    speedup,
)
from cellpm.exceptions import ParticleMethodError, UsageError

from .base import CommandResult

PARAM_FIELDS = (
    "d",
    "n_cell",
    "n_max",
    "n_p_max",
    "tau_i",
    "tau_e",
    "tau_f",
    "tau_eg",
    "c_u",
    "c_alpha",
    "c_beta",
    "c_gamma",
    "c_c",
    "T",
)


def _number(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"Sweep bound '{text}' is not a number") from None


def parse_sweep(text: str) -> List[float]:
    """
    Parse "a:b:step" (b inclusive; step defaults to 1) into the sweep points.

    Integer bounds give integer points. An empty range is a usage error.
    """
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise UsageError(f"Sweep '{text}' must look like a:b or a:b:step")
    start, stop = _number(parts[0]), _number(parts[1])
    step = _number(parts[2]) if len(parts) == 3 else 1.0
    if step <= 0:
        raise UsageError(f"Sweep step must be positive, got {parts[2]}")

    count = int(np.floor((stop - start) / step + 1e-9)) + 1 if stop >= start else 0
    if count <= 0:
        raise UsageError(f"Sweep '{text}' is empty")
    points = start + step * np.arange(count)
    if all(float(v).is_integer() for v in (start, step)):
        return [int(v) for v in points]
    return [float(v) for v in points]


def handle_command(**kwargs: Any) -> CommandResult:
    """
    Evaluate a speedup model over a sweep and write the CSV.

    Args:
        **kwargs: Command parameters
            - model: "cell", "amdahl" or "gustafson"
            - sweep: "a:b:step" over N_p_max (cell) or n_CPU (amdahl, gustafson)
            - out: CSV file to write; printed only when absent
            - d, n_cell, n_max, ...: cost constants of the model
    """
    model = kwargs["model"]
    try:
        points = parse_sweep(kwargs["sweep"])
        params = ComplexityParams(
            **{name: kwargs[name] for name in PARAM_FIELDS if kwargs.get(name) is not None}
        )
        table = speedup(model, params, points)
    except ValidationError as e:
        return CommandResult(
            False, message=f"Invalid model constants: {e}", error=e, input_error=True
        )
    except ParticleMethodError as e:
        logging.error(f"Speedup evaluation failed: {e}")
        return CommandResult(False, message=str(e), error=e)

    data = {
        **table.to_dict(),
        "params": params.model_dump(),
        "csv": table.to_csv(),
    }
    if model != "cell":
        data["continuity"] = branch_continuity(params.n_cell, params.d)
        data["assignment"] = processor_assignment(
            params.n_cell, int(points[-1]), params.d
        )

    out = kwargs.get("out")
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(data["csv"])
        data["out"] = str(path)
        logging.info(f"Wrote {len(table.rows)} {model} speedup rows to {path}")

    return CommandResult(
        True,
        data=data,
        message=f"{model} speedup over {len(table.rows)} points"
        + (f" written to {out}" if out else ""),
    )


_NUMBER = {"type": "number", "minimum": 0}

DEFINITION = CommandDefinition(
    name="speedup",
    description="Emit the cell, Amdahl or Gustafson speedup curve of the complexity model as CSV",
    handler=handle_command,
    parameters={
        "model": {"type": "string", "enum": list(SPEEDUP_MODELS)},
        "sweep": {
            "type": "string",
            "description": "a:b:step over N_p_max (cell) or n_CPU (amdahl, gustafson)",
        },
        "out": {"type": "string", "description": "CSV output path"},
        "d": {"type": "integer", "minimum": 1},
        "n_cell": {"type": "integer", "minimum": 1},
        "T": {"type": "integer", "minimum": 0},
        **{
            name: _NUMBER
            for name in PARAM_FIELDS
            if name not in ("d", "n_cell", "T")
        },
    },
    required_params=["model", "sweep"],
    usage_hint="Usage: cellpm speedup --model cell|amdahl|gustafson --sweep a:b:step [--out FILE.csv] [--d D] [--n-cell N]",
)
