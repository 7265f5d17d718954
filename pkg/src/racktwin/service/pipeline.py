"""Per-tick frame pipeline: condition, encode, plan, diff, publish.

One step turns a raw telemetry frame into a single wire packet. The first
step (and any step after the node set changes) produces a full packet;
steady-state steps produce deltas. All of a tick's changes are committed
into one packet, never split.
"""

from __future__ import annotations

from typing import Any, Iterable, Iterator, Optional, Sequence

from ..batching import naive_stats, plan_batches, scene_stats, stats_report
from ..history import FocusQuery, HistoryStore, RetentionPolicy, focus
from ..ingest import DEFAULT_ALERT_RULES, AlertRule, condition
from ..model import Alert, SnapshotFrame
from ..scene import RenderItem, StructuralChangeError, diff_updates, frame_to_scene
from ..sceneconfig import SceneSpec, default_scene_spec
from . import wire


class TwinPipeline:
    """Stateful frame-to-packet pipeline with attached history.

    Not thread-safe by itself: callers serialize step(); readers consume
    the immutable frames and packets it publishes.
    """

    def __init__(
        self,
        spec: Optional[SceneSpec] = None,
        rules: Sequence[AlertRule] = DEFAULT_ALERT_RULES,
        retention: RetentionPolicy = RetentionPolicy(),
    ):
        self.spec = spec if spec is not None else default_scene_spec()
        self.rules = list(rules)
        self.history = HistoryStore(retention)
        self._prev_frame: Optional[SnapshotFrame] = None
        self._prev_items: Optional[list[RenderItem]] = None
        self._latest_alerts: tuple[Alert, ...] = ()
        self._latest_stats: dict[str, Any] = {}
        self._latest_report: str = ""

    def encode_frame(self, frame: SnapshotFrame) -> list[RenderItem]:
        return frame_to_scene(
            frame,
            layout=self.spec.layout,
            templates=self.spec.templates,
            policy=self.spec.policy,
        )

    def _full_packet(self, timestamp: int, items: list[RenderItem]) -> dict[str, Any]:
        return wire.full_packet(
            timestamp=timestamp,
            items=items,
            batches=plan_batches(items),
            alerts=self._latest_alerts,
            stats=self._latest_stats,
            templates=self.spec.templates,
        )

    def step(self, frame: SnapshotFrame) -> dict[str, Any]:
        """Ingest one frame; returns the packet to broadcast for this tick."""
        conditioned = condition(frame, self.rules, previous=self._prev_frame)
        enriched = conditioned.frame
        self.history.append(enriched)
        items = self.encode_frame(enriched)
        batches = plan_batches(items)
        self._latest_alerts = conditioned.alerts
        naive = naive_stats(items)
        instanced = scene_stats(batches)
        self._latest_stats = wire.stats_to_wire(naive, instanced)
        self._latest_report = stats_report(naive, instanced)

        if self._prev_items is None:
            packet = self._full_packet(enriched.timestamp, items)
        else:
            try:
                updates = diff_updates(self._prev_items, items)
                packet = wire.delta_packet(
                    timestamp=enriched.timestamp,
                    updates=updates,
                    alerts=self._latest_alerts,
                    stats=self._latest_stats,
                )
            except StructuralChangeError:
                packet = self._full_packet(enriched.timestamp, items)

        self._prev_frame = enriched
        self._prev_items = items
        return packet

    def snapshot_packet(self) -> dict[str, Any]:
        """Full packet for the current scene (what a new subscriber gets)."""
        if self._prev_items is None or self._prev_frame is None:
            raise RuntimeError("pipeline has not processed a frame yet")
        return self._full_packet(self._prev_frame.timestamp, self._prev_items)

    def packet_at(self, t: int) -> dict[str, Any]:
        """Full packet reconstructed from history at time t (floor)."""
        frame = self.history.at(t)
        items = self.encode_frame(frame)
        batches = plan_batches(items)
        stats = wire.stats_to_wire(naive_stats(items), scene_stats(batches))
        alerts = self._latest_alerts if frame is self._prev_frame else ()
        return wire.full_packet(
            timestamp=frame.timestamp,
            items=items,
            batches=batches,
            alerts=alerts,
            stats=stats,
            templates=self.spec.templates,
        )

    @property
    def latest_frame(self) -> Optional[SnapshotFrame]:
        return self._prev_frame

    @property
    def latest_alerts(self) -> tuple[Alert, ...]:
        return self._latest_alerts

    @property
    def latest_stats(self) -> dict[str, Any]:
        return dict(self._latest_stats)

    @property
    def latest_report(self) -> str:
        return self._latest_report

    def focus_nodes(self, query: FocusQuery) -> list[str]:
        if self._prev_frame is None:
            return []
        return focus(self._prev_frame, query)


def replay_packets(
    frames: Iterable[SnapshotFrame],
    spec: Optional[SceneSpec] = None,
) -> Iterator[dict[str, Any]]:
    """Packet stream over stored frames: full first, deltas after.

    Replays frames exactly as retained (no re-conditioning; stored frames
    already carry their merged alert ids). A node-set change mid-stream
    produces a full resync packet, mirroring the live path.
    """
    spec = spec if spec is not None else default_scene_spec()
    prev_items: Optional[list[RenderItem]] = None
    for frame in frames:
        items = frame_to_scene(
            frame, layout=spec.layout, templates=spec.templates, policy=spec.policy
        )
        batches = plan_batches(items)
        stats = wire.stats_to_wire(naive_stats(items), scene_stats(batches))
        if prev_items is None:
            packet = wire.full_packet(frame.timestamp, items, batches, (), stats, spec.templates)
        else:
            try:
                updates = diff_updates(prev_items, items)
                packet = wire.delta_packet(frame.timestamp, updates, (), stats)
            except StructuralChangeError:
                packet = wire.full_packet(frame.timestamp, items, batches, (), stats, spec.templates)
        prev_items = items
        yield packet
