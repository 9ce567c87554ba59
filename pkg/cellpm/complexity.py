"""
Time-complexity bounds and speedup models of the cell-list scheme.

Work counts (Xi_calc, Xi_com and their helpers) are exact integers; bounds
and speedups are evaluated in double precision. The speedup formulas are
the approximations as stated, evaluated literally.
"""

import csv
import io
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, model_validator

from cellpm.exceptions import DivisibilityError, UnknownModelError, UsageError

SpeedupModel = Literal["cell", "amdahl", "gustafson"]
SPEEDUP_MODELS: Tuple[str, ...] = ("cell", "amdahl", "gustafson")


class ComplexityParams(BaseModel):
    """Cost constants of one particle method; defaults are the usual plotting constants."""

    d: int = Field(default=2, ge=1)
    n_cell: int = Field(default=900, ge=1, description="Number of cells N_cell")
    n_max: float = Field(default=1.0, ge=0, description="Max particles per cell")
    n_p_max: Optional[float] = Field(
        default=None, ge=0, description="Max particle count; defaults to N_cell * n_max"
    )
    tau_i: float = Field(default=3.0, ge=0)
    tau_e: float = Field(default=3.0, ge=0)
    tau_f: float = Field(default=1.0, ge=0)
    tau_eg: float = Field(default=1.0, ge=0, description="Cost of evolving g")
    c_u: float = Field(default=1.0, ge=0)
    c_alpha: float = Field(default=1.0, ge=0)
    c_beta: float = Field(default=1.0, ge=0)
    c_gamma: float = Field(default=1.0, ge=0)
    c_c: float = Field(default=1.0, ge=0)
    T: int = Field(default=1, ge=0, description="Number of state transitions")

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def _fill_particle_count(self) -> "ComplexityParams":
        if self.n_p_max is None:
            object.__setattr__(self, "n_p_max", self.n_cell * self.n_max)
        return self

    @property
    def patterns(self) -> int:
        return 3**self.d


@dataclass(frozen=True)
class AggregateConstants:
    """Per-process costs of each pipeline stage."""

    c_f: float
    c_eg: float
    c_collect: float
    c_copy: float
    c_dist: float
    c_step: float

    @property
    def calc(self) -> float:
        """Per-process cost of the computation stages."""
        return self.c_eg + self.c_dist + self.c_step

    @property
    def com(self) -> float:
        """Per-process cost of the communication stages."""
        return self.c_collect + self.c_copy

    @property
    def total(self) -> float:
        return self.calc + self.com


def aggregate_constants(params: ComplexityParams) -> AggregateConstants:
    d, p, n = params.d, params.patterns, params.n_max
    return AggregateConstants(
        c_f=params.tau_f,
        c_eg=params.tau_eg,
        c_collect=params.c_gamma * d + p * (params.c_beta * d + params.c_c * d + n),
        c_copy=params.c_gamma * d + p * (params.c_beta * d + n),
        c_dist=n * (params.c_alpha * d + 1),
        c_step=n * (params.tau_e + p * n * params.c_u * d + p * n * params.tau_i),
    )


def neighborhood_bounds(params: ComplexityParams) -> Tuple[float, float]:
    """(tau_u, varsigma_u) of the cell-list neighborhood: (3^d n_max d C_u, 3^d n_max)."""
    p = params.patterns
    return p * params.n_max * params.d * params.c_u, p * params.n_max


def _check_counts(n_cell: int, n_cpu: int, d: int) -> int:
    patterns = 3**d
    if n_cpu < 1:
        raise UsageError(f"n_CPU must be at least 1, got {n_cpu}")
    if n_cell < 1 or n_cell % patterns:
        raise DivisibilityError(f"N_cell={n_cell} is not a positive multiple of 3^d={patterns}")
    return patterns


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def pattern_split(n_cell: int, n_cpu: int, d: int) -> Dict[str, int]:
    """n_1, n_2, M_1, M_2 for 3^d <= n_CPU: processors and processes per checkerboard pattern."""
    patterns = _check_counts(n_cell, n_cpu, d)
    per_pattern = n_cell // patterns
    n1 = n_cpu % patterns
    n2 = patterns - n1
    m1 = _ceil_div(per_pattern, _ceil_div(n_cpu, patterns))
    floor_share = n_cpu // patterns
    m2 = _ceil_div(per_pattern, floor_share) if floor_share else per_pattern
    return {"n1": n1, "n2": n2, "M1": m1, "M2": m2}


def xi_calc_branches(n_cell: int, n_cpu: int, d: int) -> Dict[str, int]:
    """Every branch of Xi_calc whose range contains n_CPU."""
    patterns = _check_counts(n_cell, n_cpu, d)
    branches = {}
    if n_cpu <= patterns:
        branches["few"] = _ceil_div(patterns, n_cpu) * (n_cell // patterns)
    if patterns <= n_cpu <= n_cell:
        branches["shared"] = pattern_split(n_cell, n_cpu, d)["M2"]
    if n_cpu > n_cell:
        branches["saturated"] = 1
    return branches


def xi_com_branches(n_cell: int, n_cpu: int, d: int) -> Dict[str, int]:
    """Every branch of Xi_com whose range contains n_CPU."""
    patterns = _check_counts(n_cell, n_cpu, d)
    branches = {}
    if n_cpu <= patterns:
        branches["few"] = n_cell
    if patterns <= n_cpu <= n_cell:
        split = pattern_split(n_cell, n_cpu, d)
        branches["shared"] = split["n1"] * split["M1"] + split["n2"] * split["M2"]
    if n_cpu > n_cell:
        branches["saturated"] = patterns
    return branches


def _first(branches: Dict[str, int]) -> int:
    return next(iter(branches.values()))


def xi_calc(n_cell: int, n_cpu: int, d: int) -> int:
    """Maximum number of processes one processor computes per step."""
    return _first(xi_calc_branches(n_cell, n_cpu, d))


def xi_com(n_cell: int, n_cpu: int, d: int) -> int:
    """Maximum number of sequential communication rounds of one processor per step."""
    return _first(xi_com_branches(n_cell, n_cpu, d))


def branch_continuity(n_cell: int, d: int) -> Dict[str, object]:
    """Evaluate both definitions at n_CPU = 3^d, where their ranges overlap."""
    patterns = 3**d
    calc = xi_calc_branches(n_cell, patterns, d)
    com = xi_com_branches(n_cell, patterns, d)
    agree = len(set(calc.values())) <= 1 and len(set(com.values())) <= 1
    if not agree:
        logging.warning(f"Xi branches disagree at n_CPU=3^d for N_cell={n_cell}: {calc} {com}")
    return {"n_cpu": patterns, "xi_calc": calc, "xi_com": com, "agree": agree}


def processor_assignment(n_cell: int, n_cpu: int, d: int) -> Dict[str, object]:
    """How the checkerboard patterns are spread over n_CPU processors."""
    patterns = _check_counts(n_cell, n_cpu, d)
    per_pattern = n_cell // patterns
    if n_cpu <= patterns:
        return {
            "branch": "few",
            "patterns_per_processor": _ceil_div(patterns, n_cpu),
            "processes_per_pattern": per_pattern,
        }
    if n_cpu <= n_cell:
        split = pattern_split(n_cell, n_cpu, d)
        return {
            "branch": "shared",
            "patterns_with_more_processors": split["n1"],
            "processors_on_those": _ceil_div(n_cpu, patterns),
            "patterns_with_fewer_processors": split["n2"],
            "processors_on_the_rest": n_cpu // patterns,
            **split,
        }
    return {"branch": "saturated", "idle_processors": n_cpu - n_cell}


def time_bound_sequential(params: ComplexityParams) -> float:
    """All-pairs sequential bound T(N(N tau_i + N C_u d + tau_e) + tau_f + tau_eg)."""
    n = float(params.n_p_max or 0.0)
    per_step = (
        n * (n * params.tau_i + n * params.c_u * params.d + params.tau_e)
        + params.tau_f
        + params.tau_eg
    )
    return params.T * per_step


def time_bound_parallel_raw(
    params: ComplexityParams, active_total: Optional[int] = None
) -> float:
    """
    Single-processor bound of the distributed scheme, stage by stage.

    `active_total` is the sum of active processes over all checkerboard
    patterns; it equals N_cell, which is the default.
    """
    d, p, n = params.d, params.patterns, params.n_max
    cells = params.n_cell
    active = cells if active_total is None else active_total
    per_step = (
        params.tau_f
        + cells * params.tau_eg
        + active * (params.c_gamma * d + p * (params.c_beta * d + params.c_c * d + n))
        + cells * n * (params.c_alpha * d + 1)
        + cells * n * (params.tau_e + p * n * params.c_u * d + p * n * params.tau_i)
        + active * (params.c_gamma * d + p * (params.c_beta * d + n))
    )
    return params.T * per_step


def time_bound_parallel(params: ComplexityParams, n_cpu: int) -> float:
    """T(C_f + Xi_calc (C_eg + C_dist + C_step) + Xi_com (C_collect + C_copy))."""
    c = aggregate_constants(params)
    calc = xi_calc(params.n_cell, n_cpu, params.d)
    com = xi_com(params.n_cell, n_cpu, params.d)
    return params.T * (c.c_f + calc * c.calc + com * c.com)


def speedup_cell(params: ComplexityParams, n_p_max: float) -> float:
    """Cell-list scheme on one processor versus the all-pairs sequential transition."""
    c = aggregate_constants(params)
    d, p, n_max = params.d, params.patterns, params.n_max
    n = float(n_p_max)
    numerator = (
        n * n * params.c_u * d + n * (p * n_max * params.tau_i + params.tau_e)
        + params.tau_f
        + params.tau_eg
    )
    denominator = (
        n
        * (
            p * n_max * params.c_u * d
            + p * n_max * params.tau_i
            + params.tau_e
            + (params.tau_eg + c.c_collect + c.c_dist + c.c_copy) / n_max
        )
        + params.tau_f
    )
    return numerator / denominator


def _parallel_ratio(c: AggregateConstants, n_cell: int, n_cpu: int, d: int) -> float:
    numerator = c.c_f + n_cell * c.total
    denominator = c.c_f + xi_calc(n_cell, n_cpu, d) * c.calc + xi_com(n_cell, n_cpu, d) * c.com
    return numerator / denominator


def speedup_amdahl(params: ComplexityParams, n_cpu: int) -> float:
    """Fixed problem size N_cell on n_CPU processors."""
    return _parallel_ratio(aggregate_constants(params), params.n_cell, n_cpu, params.d)


def speedup_gustafson(params: ComplexityParams, n_cpu: int) -> float:
    """Problem size grows with the processors: N_cell = n_CPU * N'_cell."""
    return _parallel_ratio(
        aggregate_constants(params), n_cpu * params.n_cell, n_cpu, params.d
    )


@dataclass(frozen=True)
class SpeedupRow:
    model: str
    x: float
    speedup: float


@dataclass(frozen=True)
class SpeedupTable:
    model: str
    rows: Tuple[SpeedupRow, ...]

    @property
    def x_label(self) -> str:
        return "N_p_max" if self.model == "cell" else "n_CPU"

    def values(self) -> List[float]:
        return [r.speedup for r in self.rows]

    def to_csv(self) -> str:
        """One row per sweep point, 6 significant digits."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["model", self.x_label, "speedup"])
        for r in self.rows:
            writer.writerow([r.model, f"{r.x:.6g}", f"{r.speedup:.6g}"])
        return buffer.getvalue()

    def to_dict(self) -> Dict[str, object]:
        return {
            "model": self.model,
            "x_label": self.x_label,
            "rows": [{"x": r.x, "speedup": r.speedup} for r in self.rows],
        }


def speedup(model: str, params: ComplexityParams, sweep: Iterable[float]) -> SpeedupTable:
    """Evaluate one speedup model over the sweep (N_p_max for 'cell', n_CPU otherwise)."""
    if model not in SPEEDUP_MODELS:
        raise UnknownModelError(
            f"Unknown speedup model '{model}'. Available: {', '.join(SPEEDUP_MODELS)}"
        )
    points = list(sweep)
    if not points:
        raise UsageError("Speedup sweep is empty")

    rows = []
    for x in points:
        if model == "cell":
            value = speedup_cell(params, x)
        elif model == "amdahl":
            value = speedup_amdahl(params, int(x))
        else:
            value = speedup_gustafson(params, int(x))
        rows.append(SpeedupRow(model=model, x=x, speedup=value))
    logging.debug(f"Evaluated {model} speedup over {len(rows)} points")
    return SpeedupTable(model=model, rows=tuple(rows))
