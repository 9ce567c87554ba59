"""
Command handler for the verification checks.

`verify <instance>` runs both interpreters and compares them, audits the
communication log, checks the motion constraints on the sequential trace and
checks the interaction laws of the instance's method. `verify --suite
lemmas` runs the index and runtime checks over a grid family.
"""

import logging
from typing import Any, Dict

from cellpm.command_registry import CommandDefinition
from cellpm.config import get_default_seed
from cellpm.exceptions import (
    ConstraintViolationError,
    DomainViolationError,
    ParticleMethodError,
)
from cellpm.methods import instantiate
from cellpm.runtime import ExecMode, audit_communications
from cellpm.serialization import load_instance, state_digest
from cellpm.verify import (
    check_equivalence,
    check_interaction_laws,
    check_motion_constraints,
    lemma_suite,
)

from .base import CommandResult


def _verify_instance(path: str, kwargs: Dict[str, Any]) -> CommandResult:
    seed = kwargs.get("seed", get_default_seed())
    instance = load_instance(path)
    spec = instantiate(instance.method)

    try:
        run = check_equivalence(
            instance,
            mode=ExecMode(kwargs.get("mode", ExecMode.REFERENCE.value)),
            spec=spec,
            tolerance=kwargs.get("tolerance"),
            max_iterations=kwargs.get("max_iterations"),
        )
    except (ConstraintViolationError, DomainViolationError) as e:
        logging.warning(f"Verification of {path} hit a constraint violation: {e}")
        return CommandResult(
            False,
            data={
                "instance": path,
                "ok": False,
                "constraint": getattr(e, "constraint", "domain containment"),
                "particle_id": e.particle_id,
                "step": e.step,
            },
            message=f"Verification failed: {e}",
            error=e,
        )

    audit = audit_communications(run.distributed.comm_log.events)
    motion = check_motion_constraints(
        run.sequential.states, r_c=instance.r_c, domain=instance.domain
    )
    laws = check_interaction_laws(
        spec, seed, kwargs.get("trials", 1000), d=instance.d
    )
    ok = run.report.match and audit.ok and motion.ok and laws.ok
    report = {
        "instance": path,
        "method": spec.name,
        "ok": ok,
        "digest_seq": state_digest(run.sequential.final),
        "digest_par": state_digest(run.distributed.final),
        "equivalence": run.report.to_dict(),
        "audit": audit.to_dict(),
        "motion": motion.to_dict(),
        "laws": laws.to_dict(),
    }
    if not ok:
        return CommandResult(False, data=report, message=f"Verification of {path} failed")
    return CommandResult(True, data=report, message=f"Verification of {path} passed")


def _verify_lemmas(kwargs: Dict[str, Any]) -> CommandResult:
    max_cells = kwargs.get("max_cells", 729)
    report = lemma_suite(
        max_cells,
        dims=tuple(kwargs.get("dims", [1, 2, 3])),
        seed=kwargs.get("seed", get_default_seed()),
    )
    data = {"suite": "lemmas", **report.to_dict()}
    if not report.ok:
        return CommandResult(False, data=data, message="Lemma suite failed")
    return CommandResult(
        True,
        data=data,
        message=f"Lemma suite passed on {report.shapes} grid shapes (max_cells={max_cells})",
    )


def handle_command(**kwargs: Any) -> CommandResult:
    """
    Verify an instance file or run a check suite.

    Args:
        **kwargs: Command parameters
            - instance: path of the instance JSON file
            - suite: "lemmas" to run the lemma suite instead
            - max_cells: bound on the number of cells of the suite's grids
            - dims: dimensions covered by the suite
            - seed: seed for randomized checks
            - trials: random triples for the interaction-law check
            - tolerance: relative float tolerance (defaults by method exactness)
            - mode: execution mode of the distributed run
    """
    instance = kwargs.get("instance")
    suite = kwargs.get("suite")
    if (instance is None) == (suite is None):
        return CommandResult(
            False,
            message="Give either an instance file or --suite lemmas, not both",
            input_error=True,
        )

    try:
        if suite:
            return _verify_lemmas(kwargs)
        return _verify_instance(instance, kwargs)
    except ParticleMethodError as e:
        logging.error(f"Verification could not run: {e}")
        return CommandResult(False, message=f"Verification could not run: {e}", error=e)


DEFINITION = CommandDefinition(
    name="verify",
    description="Check sequential/distributed equivalence of an instance, or run the lemma suite",
    handler=handle_command,
    parameters={
        "instance": {"type": "string", "description": "Path of the instance JSON file"},
        "suite": {"type": "string", "enum": ["lemmas"]},
        "max_cells": {"type": "integer", "minimum": 1, "default": 729},
        "dims": {
            "type": "array",
            "items": {"type": "integer", "minimum": 1},
            "minItems": 1,
        },
        "seed": {"type": "integer"},
        "trials": {"type": "integer", "minimum": 0, "default": 1000},
        "tolerance": {"type": "number", "minimum": 0},
        "mode": {
            "type": "string",
            "enum": [m.value for m in ExecMode],
            "default": ExecMode.REFERENCE.value,
        },
        "max_iterations": {"type": "integer", "minimum": 1},
    },
    required_params=[],
    usage_hint="Usage: cellpm verify <instance.json> | cellpm verify --suite lemmas [--max-cells N]",
)
