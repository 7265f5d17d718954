"""Shared domain types for the cluster digital twin.

Telemetry snapshots are the unit everything else consumes: a SnapshotFrame
maps node names to immutable per-node readings for one instant. Frames are
frozen once built so they can be shared freely across worker threads and
retained by the history store without copies.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional


class NodeKind(str, Enum):
    CPU_ONLY = "cpu_only"
    GPU_ACCELERATED = "gpu_accelerated"


class NodeState(str, Enum):
    ACTIVE = "active"
    IDLE = "idle"
    OFF = "off"


class ModelError(ValueError):
    """A domain value violates its declared invariants."""


@dataclass(frozen=True)
class GpuTelemetry:
    """One GPU's readings inside a node snapshot."""

    gpu_index: int
    utilization: float
    mem_used_bytes: int
    mem_capacity_bytes: int
    power_draw_w: float
    temp_c: float

    def validate(self) -> None:
        if self.gpu_index < 0:
            raise ModelError(f"gpu_index must be >= 0, got {self.gpu_index}")
        if not 0.0 <= self.utilization <= 1.0:
            raise ModelError(f"utilization out of [0,1]: {self.utilization}")
        if not 0 <= self.mem_used_bytes <= self.mem_capacity_bytes:
            raise ModelError(
                f"mem_used_bytes {self.mem_used_bytes} outside "
                f"[0, {self.mem_capacity_bytes}]"
            )
        if self.power_draw_w < 0:
            raise ModelError(f"power_draw_w must be >= 0: {self.power_draw_w}")


@dataclass(frozen=True)
class NodeTelemetry:
    """One compute node's metric snapshot.

    ``gpus`` is empty exactly when ``kind`` is CPU_ONLY. An OFF node carries
    no live readings: cpu_load is 0 and every GPU reports zero utilization,
    power and memory use (temperatures may remain as ambient sensor values).
    """

    node_name: str
    kind: NodeKind
    state: NodeState
    cpu_load: float
    node_temp_c: float
    alerts: tuple[str, ...] = ()
    user: Optional[str] = None
    job_id: Optional[str] = None
    gpus: tuple[GpuTelemetry, ...] = ()

    def validate(self) -> None:
        if not self.node_name:
            raise ModelError("node_name must be non-empty")
        if not 0.0 <= self.cpu_load <= 1.0:
            raise ModelError(f"cpu_load out of [0,1]: {self.cpu_load}")
        if (self.kind is NodeKind.CPU_ONLY) != (len(self.gpus) == 0):
            raise ModelError(
                f"node {self.node_name}: gpus must be empty iff kind is cpu_only "
                f"(kind={self.kind.value}, {len(self.gpus)} gpus)"
            )
        if self.state is NodeState.OFF:
            if self.cpu_load != 0.0:
                raise ModelError(f"node {self.node_name} is off but cpu_load != 0")
            for gpu in self.gpus:
                if gpu.utilization != 0.0 or gpu.power_draw_w != 0.0 or gpu.mem_used_bytes != 0:
                    raise ModelError(
                        f"node {self.node_name} is off but gpu{gpu.gpu_index} has live readings"
                    )
        for gpu in self.gpus:
            gpu.validate()

    def with_alerts(self, alerts: tuple[str, ...]) -> "NodeTelemetry":
        return replace(self, alerts=alerts)


@dataclass(frozen=True)
class EnvTelemetry:
    """Facility sensor reading (humidity, airflow, temperature)."""

    sensor_id: str
    humidity_pct: float
    airflow: float
    temp_c: float
    timestamp: int

    def validate(self) -> None:
        if not self.sensor_id:
            raise ModelError("sensor_id must be non-empty")
        if not 0.0 <= self.humidity_pct <= 100.0:
            raise ModelError(f"humidity_pct out of [0,100]: {self.humidity_pct}")


@dataclass(frozen=True)
class SnapshotFrame:
    """Immutable timestamped map of node name -> telemetry.

    Node iteration is always in sorted-name order so downstream scene and
    diff outputs are deterministic.
    """

    timestamp: int
    nodes: dict[str, NodeTelemetry] = field(default_factory=dict)
    env: tuple[EnvTelemetry, ...] = ()

    def validate(self) -> None:
        for name, node in self.nodes.items():
            if name != node.node_name:
                raise ModelError(f"frame key {name!r} != node_name {node.node_name!r}")
            node.validate()
        for record in self.env:
            record.validate()

    def node_names(self) -> list[str]:
        return sorted(self.nodes)

    def iter_nodes(self):
        for name in sorted(self.nodes):
            yield self.nodes[name]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SnapshotFrame):
            return NotImplemented
        return (
            self.timestamp == other.timestamp
            and self.nodes == other.nodes
            and self.env == other.env
        )

    __hash__ = None  # nodes dict is not hashable; equality by value only


@dataclass(frozen=True)
class Alert:
    """A fired alert: node, the rule that fired, the offending value."""

    node: str
    rule_id: str
    value: float
    timestamp: int
    severity: str = "warn"
