"""Append-only run logs for the teleoperation service.

One JSON-lines file per run under the storage root.  Records are flushed
per append, so a crash can only lose (or truncate) the final line; the
loader drops an unparsable trailing record with a warning instead of
failing, which keeps every completed record readable.
"""

from __future__ import annotations

import json
import logging
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

logger = logging.getLogger(__name__)

__all__ = ["RunLog", "read_run_log"]


@dataclass
class RunLog:
    """Appendable record stream for one teleoperation run."""

    storage_root: Path
    run_id: str = field(default_factory=lambda: f"{time.strftime('%Y%m%dT%H%M%S')}-{uuid.uuid4().hex[:8]}")

    def __post_init__(self):
        self.storage_root = Path(self.storage_root)
        self.storage_root.mkdir(parents=True, exist_ok=True)
        self.path = self.storage_root / f"run-{self.run_id}.jsonl"

    def append(self, record: dict) -> None:
        line = json.dumps(record, sort_keys=True)
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")
            fh.flush()

    def records(self) -> list[dict]:
        return read_run_log(self.path)


def read_run_log(path: str | Path) -> list[dict]:
    """Parse a run log, dropping a truncated trailing record with a warning."""
    path = Path(path)
    if not path.exists():
        return []
    records: list[dict] = []
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().split("\n")
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            records.append(json.loads(line))
        except json.JSONDecodeError:
            if lineno == len(lines) or all(not l.strip() for l in lines[lineno:]):
                logger.warning("%s: dropping truncated trailing record on line %d", path, lineno)
            else:
                raise ValueError(f"{path}:{lineno}: corrupt record in the middle of the log")
    return records
