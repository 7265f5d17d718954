"""Frame sources the service can run from.

Either the built-in synthetic stream or a watched directory that an
external collector drops snapshot files into. Both yield SnapshotFrame
values in timestamp order.
"""

from __future__ import annotations

import time
from pathlib import Path
from typing import Iterator, Optional

from ..ingest import SimulatorConfig, frame_stream, parse_snapshot
from ..model import SnapshotFrame


def simulator_source(config: SimulatorConfig, start_tick: int = 0) -> Iterator[SnapshotFrame]:
    return (frame for _, frame in frame_stream(config, start_tick))


def watch_directory(
    path: str | Path,
    poll_interval_s: float = 0.5,
    once: bool = False,
    on_error=None,
) -> Iterator[SnapshotFrame]:
    """Yield frames parsed from new snapshot files appearing under path.

    Files are consumed in sorted-name order, each at most once; name your
    drops so that sort order is arrival order (zero-padded tick numbers).
    Files that fail to parse entirely are skipped after reporting via
    on_error(path, message). With once=True, the pending files are drained
    and iteration stops instead of polling forever.
    """
    root = Path(path)
    if not root.is_dir():
        raise FileNotFoundError(f"watch directory does not exist: {root}")
    seen: set[str] = set()
    while True:
        pending = sorted(
            p for p in root.iterdir()
            if p.is_file() and p.suffix in (".tsv", ".csv") and p.name not in seen
        )
        for file in pending:
            seen.add(file.name)
            try:
                text = file.read_text(encoding="utf-8")
                result = parse_snapshot(text)
            except (OSError, ValueError) as exc:
                if on_error:
                    on_error(file, str(exc))
                continue
            if result.errors and on_error:
                for err in result.errors:
                    on_error(file, f"line {err.line}: {err.message}")
            if result.frame.nodes:
                yield result.frame
            elif on_error:
                on_error(file, "no usable rows")
        if once:
            return
        time.sleep(poll_interval_s)
