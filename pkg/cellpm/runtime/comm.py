"""
Communication records of the distributed runtime and their audit.

Every pull issued during copy and collect is logged as a CommEvent. The
audit checks the checkerboard guarantee: within one phase no two readers
pull from the same target and no reader is itself pulled from.
"""

import csv
import io
import logging
from dataclasses import asdict, dataclass, field
from typing import Dict, Iterable, List, Literal, Optional, Sequence

import numpy as np

CommKind = Literal["copy", "collect"]

CSV_COLUMNS = ["phase", "k", "reader", "target", "kind", "payload_size"]


@dataclass(frozen=True)
class CommEvent:
    """One point-to-point pull: `reader` read `payload_size` particles from `target`."""

    step: int
    k: int
    reader: int
    target: int
    kind: CommKind
    payload_size: int


@dataclass(frozen=True)
class MessageBatch:
    """Immutable particles handed from a target to a reader."""

    event: CommEvent
    compartment: int
    particles: tuple


@dataclass
class CommLog:
    """Append-only log of communication events across a run."""

    events: List[CommEvent] = field(default_factory=list)

    def record(self, event: CommEvent) -> None:
        self.events.append(event)

    def extend(self, events: Iterable[CommEvent]) -> None:
        self.events.extend(events)

    def __len__(self) -> int:
        return len(self.events)

    def select(self, *, step: Optional[int] = None, kind: Optional[str] = None) -> List[CommEvent]:
        return [
            e
            for e in self.events
            if (step is None or e.step == step) and (kind is None or e.kind == kind)
        ]

    def to_csv(self) -> str:
        """CSV with columns phase,k,reader,target,kind,payload_size (phase = step)."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for e in self.events:
            writer.writerow([e.step, e.k, e.reader, e.target, e.kind, e.payload_size])
        return buffer.getvalue()

    def write_csv(self, path: str) -> None:
        with open(path, "w", newline="") as f:
            f.write(self.to_csv())


@dataclass(frozen=True)
class AuditViolation:
    step: int
    kind: str
    k: int
    target: int
    readers: tuple
    reason: str

    def to_dict(self) -> Dict:
        return asdict(self)


@dataclass(frozen=True)
class AuditReport:
    events: int
    phases: int
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> Dict:
        return {
            "events": self.events,
            "phases": self.phases,
            "ok": self.ok,
            "violations": [v.to_dict() for v in self.violations],
        }


def phase_conflicts(readers: np.ndarray, targets: np.ndarray) -> Dict[str, List]:
    """
    Conflicts inside one phase, given parallel arrays of readers and targets.

    Returns {"shared": [(target, readers)], "reader_targeted": [(target, readers)]}:
    targets pulled by more than one distinct reader, and targets that are
    themselves readers of the phase (self-pulls excluded).
    """
    shared = []
    reader_targeted = []
    if readers.size == 0:
        return {"shared": shared, "reader_targeted": reader_targeted}

    pairs = np.unique(np.stack([targets, readers], axis=1), axis=0)
    uniq_targets, counts = np.unique(pairs[:, 0], return_counts=True)
    for target in uniq_targets[counts > 1]:
        shared.append((int(target), tuple(int(r) for r in pairs[pairs[:, 0] == target, 1])))

    foreign = pairs[pairs[:, 0] != pairs[:, 1]]
    hit = np.isin(foreign[:, 0], np.unique(readers))
    for target in np.unique(foreign[hit, 0]):
        reader_targeted.append(
            (int(target), tuple(int(r) for r in foreign[foreign[:, 0] == target, 1]))
        )
    return {"shared": shared, "reader_targeted": reader_targeted}


def audit_communications(events: Sequence[CommEvent]) -> AuditReport:
    """Check every (step, kind, k) phase of the log for overlapping communications."""
    phases: Dict[tuple, List[CommEvent]] = {}
    for e in events:
        phases.setdefault((e.step, e.kind, e.k), []).append(e)

    violations = []
    for (step, kind, k), phase_events in sorted(phases.items()):
        readers = np.array([e.reader for e in phase_events], dtype=np.int64)
        targets = np.array([e.target for e in phase_events], dtype=np.int64)
        conflicts = phase_conflicts(readers, targets)
        for target, readers_of in conflicts["shared"]:
            violations.append(
                AuditViolation(step, kind, k, target, readers_of, "target shared by readers")
            )
        for target, readers_of in conflicts["reader_targeted"]:
            violations.append(
                AuditViolation(step, kind, k, target, readers_of, "reader is a target")
            )

    if violations:
        logging.warning(f"Communication audit found {len(violations)} overlapping pulls")
    return AuditReport(events=len(events), phases=len(phases), violations=tuple(violations))
