"""
Execution modes of the distributed runtime.

Within a pipeline stage or checkerboard phase the simulated processes are
independent, so a stage is a map over processes. The reference executor
runs that map as an ordered loop; the concurrent executor hands each process
to a worker thread and waits for all of them before returning, which is the
barrier between phases and stages. Results always come back in process
order, so both modes build identical states.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from typing import Callable, List, Optional, Sequence, TypeVar

from cellpm.config import get_threads

T = TypeVar("T")
R = TypeVar("R")


class ExecMode(str, Enum):
    REFERENCE = "reference"
    CONCURRENT = "concurrent"


class PhaseExecutor:
    """Runs one phase: applies fn to every item and returns results in order."""

    mode = ExecMode.REFERENCE

    def map_phase(self, fn: Callable[[T], R], items: Sequence[T]) -> List[R]:
        return [fn(item) for item in items]

    def close(self) -> None:
        pass

    def __enter__(self) -> "PhaseExecutor":
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        self.close()


class ConcurrentPhaseExecutor(PhaseExecutor):
    """Thread-pool executor; the worker count is capped by the configured thread limit."""

    mode = ExecMode.CONCURRENT

    def __init__(self, max_workers: Optional[int] = None):
        self.max_workers = max_workers or get_threads()
        self._pool = ThreadPoolExecutor(
            max_workers=self.max_workers, thread_name_prefix="cellpm-proc"
        )
        logging.debug(f"Concurrent executor started with {self.max_workers} workers")

    def map_phase(self, fn: Callable[[T], R], items: Sequence[T]) -> List[R]:
        if len(items) <= 1:
            return [fn(item) for item in items]
        futures = [self._pool.submit(fn, item) for item in items]
        # Waiting on every future is the phase barrier; the first failure propagates.
        return [f.result() for f in futures]

    def close(self) -> None:
        self._pool.shutdown(wait=True)


def make_executor(mode: ExecMode | str, max_workers: Optional[int] = None) -> PhaseExecutor:
    mode = ExecMode(mode)
    if mode is ExecMode.CONCURRENT:
        return ConcurrentPhaseExecutor(max_workers)
    return PhaseExecutor()
