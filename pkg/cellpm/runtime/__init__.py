"""
Distributed-memory runtime over simulated processes.
"""

from cellpm.runtime.comm import (
    AuditReport,
    CommEvent,
    CommLog,
    MessageBatch,
    audit_communications,
)
from cellpm.runtime.executor import ExecMode, make_executor
from cellpm.runtime.pipeline import (
    DistributedTrajectory,
    collect_all,
    copy_all,
    dist_all,
    local_interaction,
    parallel_run,
    parallel_run_traced,
    parallel_step,
    step_all,
)

__all__ = [
    "AuditReport",
    "CommEvent",
    "CommLog",
    "DistributedTrajectory",
    "ExecMode",
    "MessageBatch",
    "audit_communications",
    "collect_all",
    "copy_all",
    "dist_all",
    "local_interaction",
    "make_executor",
    "parallel_run",
    "parallel_run_traced",
    "parallel_step",
    "step_all",
]
