"""Time-indexed frame retention with floor lookups and focus queries.

at(t) returns the last frame at or before t (what a scrubber should show
for any instant), so probing between two stored timestamps yields the
earlier frame. Appends must be strictly increasing; retention evicts the
oldest frames once either the count or the age limit is crossed.
"""

from __future__ import annotations

import os
import threading
from bisect import bisect_right
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .assoc import AssocStore, glob_match
from .framecodec import frame_from_triples, frame_to_triples
from .model import NodeTelemetry, SnapshotFrame


class HistoryError(ValueError):
    """Append ordering or persistence-layout violation."""


class RangeError(LookupError):
    """A lookup time precedes everything the store retains."""


@dataclass(frozen=True)
class RetentionPolicy:
    """Keep at most max_frames frames and nothing older than max_age_ms."""

    max_frames: int = 10_000
    max_age_ms: int = 24 * 60 * 60 * 1000

    def validate(self) -> None:
        if self.max_frames < 1:
            raise ValueError("max_frames must be >= 1")
        if self.max_age_ms < 1:
            raise ValueError("max_age_ms must be >= 1")


@dataclass(frozen=True)
class FocusQuery:
    """Conjunctive node filter: every given predicate must match.

    node_glob matches the node name; user and job_id match exactly;
    alert matches a fired rule id carried on the node.
    """

    node_glob: Optional[str] = None
    user: Optional[str] = None
    job_id: Optional[str] = None
    alert: Optional[str] = None

    def validate(self) -> None:
        if self.node_glob is None and self.user is None and self.job_id is None and self.alert is None:
            raise ValueError("focus query needs at least one predicate")

    def matches(self, node: NodeTelemetry) -> bool:
        if self.node_glob is not None and not glob_match(self.node_glob, node.node_name):
            return False
        if self.user is not None and node.user != self.user:
            return False
        if self.job_id is not None and node.job_id != self.job_id:
            return False
        if self.alert is not None and self.alert not in node.alerts:
            return False
        return True


def focus(frame: SnapshotFrame, query: FocusQuery) -> list[str]:
    """Sorted node names in the frame matching every query predicate."""
    query.validate()
    return [name for name in frame.node_names() if query.matches(frame.nodes[name])]


class HistoryStore:
    """Append-only frame history, safe for many readers and one appender."""

    def __init__(self, retention: RetentionPolicy = RetentionPolicy()):
        retention.validate()
        self.retention = retention
        self._lock = threading.Lock()
        self._timestamps: list[int] = []
        self._frames: list[SnapshotFrame] = []

    def __len__(self) -> int:
        return len(self._frames)

    def append(self, frame: SnapshotFrame) -> None:
        with self._lock:
            if self._timestamps and frame.timestamp <= self._timestamps[-1]:
                raise HistoryError(
                    f"timestamp {frame.timestamp} not after latest {self._timestamps[-1]}"
                )
            self._timestamps.append(frame.timestamp)
            self._frames.append(frame)
            self._evict(frame.timestamp)

    def _evict(self, newest_ts: int) -> None:
        cutoff = newest_ts - self.retention.max_age_ms
        drop = 0
        size = len(self._frames)
        while size - drop > self.retention.max_frames or (
            drop < size and self._timestamps[drop] < cutoff
        ):
            drop += 1
        if drop:
            del self._timestamps[:drop]
            del self._frames[:drop]

    def timestamps(self) -> list[int]:
        with self._lock:
            return list(self._timestamps)

    def latest(self) -> Optional[SnapshotFrame]:
        with self._lock:
            return self._frames[-1] if self._frames else None

    def at(self, t: int) -> SnapshotFrame:
        """The frame with the greatest timestamp <= t (floor semantics)."""
        with self._lock:
            if not self._frames:
                raise RangeError("history is empty")
            idx = bisect_right(self._timestamps, t) - 1
            if idx < 0:
                raise RangeError(
                    f"time {t} precedes the earliest retained frame {self._timestamps[0]}"
                )
            return self._frames[idx]

    def range(self, t0: int, t1: int) -> list[SnapshotFrame]:
        """Frames with t0 <= timestamp <= t1, oldest first."""
        if t0 > t1:
            raise ValueError(f"range start {t0} is after range end {t1}")
        with self._lock:
            lo = bisect_right(self._timestamps, t0 - 1)
            hi = bisect_right(self._timestamps, t1)
            return self._frames[lo:hi]

    # Disk layout: <root>/history-<first_ts>/frame-<ts>.tsv (one triple
    # file per frame) plus index.tsv listing the timestamps in order.
    def save(self, root: str | os.PathLike) -> Path:
        with self._lock:
            frames = list(self._frames)
        if not frames:
            raise HistoryError("nothing to save: history is empty")
        session = Path(root) / f"history-{frames[0].timestamp}"
        session.mkdir(parents=True, exist_ok=True)
        for frame in frames:
            frame_to_triples(frame).save(session / f"frame-{frame.timestamp}.tsv")
        index = "".join(f"{frame.timestamp}\n" for frame in frames)
        (session / "index.tsv").write_text(index, encoding="utf-8")
        return session

    @classmethod
    def load(cls, session: str | os.PathLike, retention: RetentionPolicy = RetentionPolicy()) -> "HistoryStore":
        session = Path(session)
        index_path = session / "index.tsv"
        if not index_path.exists():
            raise HistoryError(f"no index file at {index_path}")
        store = cls(retention)
        for line in index_path.read_text(encoding="utf-8").splitlines():
            if not line:
                continue
            ts = int(line)
            frame_path = session / f"frame-{ts}.tsv"
            if not frame_path.exists():
                raise HistoryError(f"index lists {ts} but {frame_path} is missing")
            store.append(frame_from_triples(AssocStore.load(frame_path)))
        return store
