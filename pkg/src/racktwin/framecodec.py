"""Snapshot frames encoded as associative triples.

Convention: row = node name, col = metric path (e.g. ``gpu0.temp_c``).
Environmental records live under ``env/<sensor_id>`` rows and frame
metadata under the reserved ``frame`` row, so node names may not collide
with those prefixes.
"""

from __future__ import annotations

from .assoc import AssocStore, Value
from .model import (
    EnvTelemetry,
    GpuTelemetry,
    ModelError,
    NodeKind,
    NodeState,
    NodeTelemetry,
    SnapshotFrame,
)

FRAME_ROW = "frame"
ENV_ROW_PREFIX = "env/"

_GPU_FIELDS = ("utilization", "mem_used_bytes", "mem_capacity_bytes", "power_draw_w", "temp_c")


def frame_to_triples(frame: SnapshotFrame) -> AssocStore:
    store = AssocStore()
    store.insert(FRAME_ROW, "timestamp", frame.timestamp)
    for node in frame.iter_nodes():
        name = node.node_name
        if name == FRAME_ROW or name.startswith(ENV_ROW_PREFIX):
            raise ModelError(f"node name {name!r} collides with a reserved triple row")
        store.insert(name, "kind", node.kind.value)
        store.insert(name, "state", node.state.value)
        store.insert(name, "cpu_load", node.cpu_load)
        store.insert(name, "node_temp_c", node.node_temp_c)
        if node.user is not None:
            store.insert(name, "user", node.user)
        if node.job_id is not None:
            store.insert(name, "job_id", node.job_id)
        if node.alerts:
            store.insert(name, "alerts", ";".join(node.alerts))
        for gpu in node.gpus:
            prefix = f"gpu{gpu.gpu_index}."
            for field in _GPU_FIELDS:
                store.insert(name, prefix + field, getattr(gpu, field))
    for record in frame.env:
        row = ENV_ROW_PREFIX + record.sensor_id
        store.insert(row, "humidity_pct", record.humidity_pct)
        store.insert(row, "airflow", record.airflow)
        store.insert(row, "temp_c", record.temp_c)
        store.insert(row, "timestamp", record.timestamp)
    return store


def _as_float(val: Value) -> float:
    if isinstance(val, str):
        raise ModelError(f"expected numeric triple value, got {val!r}")
    return float(val)


def frame_from_triples(store: AssocStore) -> SnapshotFrame:
    """Rebuild a frame; inverse of frame_to_triples for valid frames."""
    by_row: dict[str, dict[str, Value]] = {}
    for row, col, val in store.triples():
        by_row.setdefault(row, {})[col] = val

    meta = by_row.pop(FRAME_ROW, None)
    if meta is None or "timestamp" not in meta:
        raise ModelError("store has no frame/timestamp triple")
    timestamp = int(meta["timestamp"])

    env: list[EnvTelemetry] = []
    nodes: dict[str, NodeTelemetry] = {}
    for row, cols in by_row.items():
        if row.startswith(ENV_ROW_PREFIX):
            env.append(
                EnvTelemetry(
                    sensor_id=row[len(ENV_ROW_PREFIX) :],
                    humidity_pct=_as_float(cols["humidity_pct"]),
                    airflow=_as_float(cols["airflow"]),
                    temp_c=_as_float(cols["temp_c"]),
                    timestamp=int(cols["timestamp"]),
                )
            )
            continue
        gpu_indices = sorted(
            {int(col[3 : col.index(".")]) for col in cols if col.startswith("gpu")}
        )
        gpus = tuple(
            GpuTelemetry(
                gpu_index=j,
                utilization=_as_float(cols[f"gpu{j}.utilization"]),
                mem_used_bytes=int(cols[f"gpu{j}.mem_used_bytes"]),
                mem_capacity_bytes=int(cols[f"gpu{j}.mem_capacity_bytes"]),
                power_draw_w=_as_float(cols[f"gpu{j}.power_draw_w"]),
                temp_c=_as_float(cols[f"gpu{j}.temp_c"]),
            )
            for j in gpu_indices
        )
        alerts_raw = cols.get("alerts")
        user = cols.get("user")
        job_id = cols.get("job_id")
        nodes[row] = NodeTelemetry(
            node_name=row,
            kind=NodeKind(str(cols["kind"])),
            state=NodeState(str(cols["state"])),
            cpu_load=_as_float(cols["cpu_load"]),
            node_temp_c=_as_float(cols["node_temp_c"]),
            alerts=tuple(str(alerts_raw).split(";")) if alerts_raw else (),
            user=str(user) if user is not None else None,
            job_id=str(job_id) if job_id is not None else None,
            gpus=gpus,
        )
    env.sort(key=lambda r: r.sensor_id)
    return SnapshotFrame(timestamp=timestamp, nodes=nodes, env=tuple(env))
