"""Delimited snapshot parsing and serialization.

Parsing is total over data rows: a malformed row never aborts the parse, it
is skipped and reported with its line number, so accepted rows + reported
errors always sum to the data-row count. Numeric fields are clamped into
the ranges the domain types declare (collector noise must not violate
downstream invariants); every clamp is counted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..model import (
    EnvTelemetry,
    GpuTelemetry,
    NodeKind,
    NodeState,
    NodeTelemetry,
    SnapshotFrame,
)
from .schema import GPU_COLUMN_FIELDS, SchemaError, SnapshotSchema, default_schema, schema_from_header


@dataclass(frozen=True)
class RowError:
    line: int
    message: str


@dataclass
class ParseResult:
    frame: SnapshotFrame
    errors: list[RowError] = field(default_factory=list)
    clamp_count: int = 0

    @property
    def accepted(self) -> int:
        return len(self.frame.nodes)


def _sniff_delimiter(header_line: str) -> str:
    return "\t" if "\t" in header_line else ","


def _parse_float(cell: str, column: str) -> float:
    try:
        val = float(cell)
    except ValueError:
        raise ValueError(f"non-numeric value {cell!r} in column {column!r}") from None
    if not math.isfinite(val):
        raise ValueError(f"non-finite value {cell!r} in column {column!r}")
    return val


def _parse_int(cell: str, column: str) -> int:
    try:
        return int(cell)
    except ValueError:
        pass
    # bytes columns written as floats (e.g. 1e9) are accepted and truncated
    val = _parse_float(cell, column)
    return int(val)


class _Clamper:
    def __init__(self) -> None:
        self.count = 0

    def clamp(self, val, lo, hi):
        if val < lo:
            self.count += 1
            return lo
        if hi is not None and val > hi:
            self.count += 1
            return hi
        return val

    def force(self, val, target):
        if val != target:
            self.count += 1
        return target


def _parse_gpu_group(cells: dict[str, str], idx: int, clamper: _Clamper) -> GpuTelemetry | None:
    group = {suffix: cells.get(f"gpu{idx}_{suffix}", "") for suffix in GPU_COLUMN_FIELDS}
    values = list(group.values())
    if all(v == "" for v in values):
        return None
    if any(v == "" for v in values):
        missing = [s for s, v in group.items() if v == ""]
        raise ValueError(f"gpu{idx} column group partially empty (missing {missing[0]!r})")
    cap = _parse_int(group["mem_cap"], f"gpu{idx}_mem_cap")
    cap = clamper.clamp(cap, 0, None)
    used = _parse_int(group["mem_used"], f"gpu{idx}_mem_used")
    used = clamper.clamp(used, 0, cap)
    return GpuTelemetry(
        gpu_index=idx,
        utilization=clamper.clamp(_parse_float(group["util"], f"gpu{idx}_util"), 0.0, 1.0),
        mem_used_bytes=used,
        mem_capacity_bytes=cap,
        power_draw_w=clamper.clamp(_parse_float(group["power_w"], f"gpu{idx}_power_w"), 0.0, None),
        temp_c=_parse_float(group["temp_c"], f"gpu{idx}_temp_c"),
    )


def _parse_row(cells: dict[str, str], schema: SnapshotSchema, clamper: _Clamper):
    name = cells.get("node", "")
    if not name:
        raise ValueError("empty node name")

    try:
        state = NodeState(cells["state"])
    except ValueError:
        raise ValueError(f"unknown state {cells['state']!r}") from None

    gpus = []
    for i in range(schema.gpu_count):
        gpu = _parse_gpu_group(cells, i, clamper)
        if gpu is not None:
            gpus.append(gpu)

    kind_cell = cells.get("kind", "")
    if kind_cell:
        try:
            kind = NodeKind(kind_cell)
        except ValueError:
            raise ValueError(f"unknown kind {kind_cell!r}") from None
        if (kind is NodeKind.CPU_ONLY) != (len(gpus) == 0):
            raise ValueError(
                f"kind {kind.value!r} inconsistent with {len(gpus)} populated gpu groups"
            )
    else:
        kind = NodeKind.GPU_ACCELERATED if gpus else NodeKind.CPU_ONLY

    cpu_load = clamper.clamp(_parse_float(cells["cpu_load"], "cpu_load"), 0.0, 1.0)
    if state is NodeState.OFF:
        cpu_load = clamper.force(cpu_load, 0.0)
        gpus = [
            GpuTelemetry(
                gpu_index=g.gpu_index,
                utilization=clamper.force(g.utilization, 0.0),
                mem_used_bytes=clamper.force(g.mem_used_bytes, 0),
                mem_capacity_bytes=g.mem_capacity_bytes,
                power_draw_w=clamper.force(g.power_draw_w, 0.0),
                temp_c=g.temp_c,
            )
            for g in gpus
        ]

    alerts_cell = cells.get("alerts", "")
    timestamp_cell = cells.get("timestamp", "")
    node = NodeTelemetry(
        node_name=name,
        kind=kind,
        state=state,
        cpu_load=cpu_load,
        node_temp_c=_parse_float(cells["node_temp_c"], "node_temp_c"),
        alerts=tuple(alerts_cell.split(";")) if alerts_cell else (),
        user=cells.get("user") or None,
        job_id=cells.get("job_id") or None,
        gpus=tuple(gpus),
    )
    row_ts = _parse_int(timestamp_cell, "timestamp") if timestamp_cell else None
    return node, row_ts


def parse_snapshot(
    text: str,
    schema: SnapshotSchema | None = None,
    timestamp: int | None = None,
) -> ParseResult:
    """Parse one delimited snapshot document into a frame.

    When ``schema`` is omitted it is inferred from the header row. The frame
    timestamp comes from the ``timestamp`` argument when given, else from
    the file's ``timestamp`` column (first data row), else 0.
    """
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise SchemaError("empty document: no header row")

    if schema is None:
        delimiter = _sniff_delimiter(lines[0])
        schema = schema_from_header(lines[0].split(delimiter), delimiter)
    else:
        schema.validate()
        if lines[0].split(schema.delimiter) != schema.header():
            raise SchemaError("header row does not match the supplied schema")

    header = schema.header()
    clamper = _Clamper()
    errors: list[RowError] = []
    nodes = {}
    frame_ts = timestamp

    for lineno, line in enumerate(lines[1:], start=2):
        if line == "":
            continue
        raw = line.split(schema.delimiter)
        if len(raw) != len(header):
            errors.append(
                RowError(lineno, f"expected {len(header)} cells, got {len(raw)}")
            )
            continue
        cells = dict(zip(header, raw))
        try:
            node, row_ts = _parse_row(cells, schema, clamper)
        except ValueError as exc:
            errors.append(RowError(lineno, str(exc)))
            continue
        if node.node_name in nodes:
            errors.append(RowError(lineno, f"duplicate node name {node.node_name!r}"))
            continue
        nodes[node.node_name] = node
        if frame_ts is None and row_ts is not None:
            frame_ts = row_ts

    frame = SnapshotFrame(timestamp=frame_ts if frame_ts is not None else 0, nodes=nodes)
    frame.validate()
    return ParseResult(frame=frame, errors=errors, clamp_count=clamper.count)


def _fmt(val) -> str:
    if isinstance(val, float):
        return repr(val)
    return str(val)


def serialize_snapshot(frame: SnapshotFrame, schema: SnapshotSchema | None = None) -> str:
    """Render a frame back to delimited text; inverse of parse_snapshot.

    Environmental records are not part of the node schema; use
    serialize_env_records for those.
    """
    if schema is None:
        gpu_count = max((len(n.gpus) for n in frame.nodes.values()), default=0)
        schema = default_schema(gpu_count)
    delim = schema.delimiter
    lines = [delim.join(schema.header())]
    for node in frame.iter_nodes():
        cells = {
            "node": node.node_name,
            "kind": node.kind.value,
            "state": node.state.value,
            "cpu_load": _fmt(node.cpu_load),
            "node_temp_c": _fmt(node.node_temp_c),
            "user": node.user or "",
            "job_id": node.job_id or "",
            "alerts": ";".join(node.alerts),
            "timestamp": str(frame.timestamp),
        }
        for gpu in node.gpus:
            cells[f"gpu{gpu.gpu_index}_util"] = _fmt(gpu.utilization)
            cells[f"gpu{gpu.gpu_index}_mem_used"] = str(gpu.mem_used_bytes)
            cells[f"gpu{gpu.gpu_index}_mem_cap"] = str(gpu.mem_capacity_bytes)
            cells[f"gpu{gpu.gpu_index}_power_w"] = _fmt(gpu.power_draw_w)
            cells[f"gpu{gpu.gpu_index}_temp_c"] = _fmt(gpu.temp_c)
        lines.append(delim.join(cells.get(name, "") for name in schema.header()))
    return "\n".join(lines) + "\n"


ENV_HEADER = ("sensor_id", "humidity_pct", "airflow", "temp_c", "timestamp")


def parse_env_records(text: str) -> tuple[list[EnvTelemetry], list[RowError]]:
    lines = text.splitlines()
    if not lines or lines[0].split("\t") != list(ENV_HEADER):
        raise SchemaError("env document must start with the sensor header row")
    records: list[EnvTelemetry] = []
    errors: list[RowError] = []
    for lineno, line in enumerate(lines[1:], start=2):
        if line == "":
            continue
        cells = line.split("\t")
        if len(cells) != len(ENV_HEADER):
            errors.append(RowError(lineno, f"expected {len(ENV_HEADER)} cells, got {len(cells)}"))
            continue
        try:
            clamper = _Clamper()
            records.append(
                EnvTelemetry(
                    sensor_id=cells[0],
                    humidity_pct=clamper.clamp(_parse_float(cells[1], "humidity_pct"), 0.0, 100.0),
                    airflow=_parse_float(cells[2], "airflow"),
                    temp_c=_parse_float(cells[3], "temp_c"),
                    timestamp=_parse_int(cells[4], "timestamp"),
                )
            )
        except ValueError as exc:
            errors.append(RowError(lineno, str(exc)))
    return records, errors


def serialize_env_records(records: tuple[EnvTelemetry, ...] | list[EnvTelemetry]) -> str:
    lines = ["\t".join(ENV_HEADER)]
    for r in sorted(records, key=lambda r: r.sensor_id):
        lines.append(
            "\t".join(
                (r.sensor_id, _fmt(r.humidity_pct), _fmt(r.airflow), _fmt(r.temp_c), str(r.timestamp))
            )
        )
    return "\n".join(lines) + "\n"
