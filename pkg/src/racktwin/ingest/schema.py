"""Snapshot file schema: which columns exist and what they mean.

Node snapshot files are TSV or CSV with a header row. Required columns are
``node``, ``state``, ``cpu_load``, ``node_temp_c`` plus, for every GPU slot
``i`` the file covers, the complete group ``gpu{i}_util``,
``gpu{i}_mem_used``, ``gpu{i}_mem_cap``, ``gpu{i}_power_w``,
``gpu{i}_temp_c``. Optional columns: ``kind``, ``user``, ``job_id``,
``alerts`` (``;``-joined ids) and ``timestamp`` (epoch ms).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field


class SchemaError(ValueError):
    """Header/schema mismatch; the message names the offending column."""


REQUIRED_COLUMNS = ("node", "state", "cpu_load", "node_temp_c")
OPTIONAL_COLUMNS = ("kind", "user", "job_id", "alerts", "timestamp")

# column suffix -> (model field on GpuTelemetry, unit)
GPU_COLUMN_FIELDS = {
    "util": ("utilization", "fraction"),
    "mem_used": ("mem_used_bytes", "bytes"),
    "mem_cap": ("mem_capacity_bytes", "bytes"),
    "power_w": ("power_draw_w", "watts"),
    "temp_c": ("temp_c", "celsius"),
}

_NODE_COLUMN_UNITS = {
    "node": "",
    "kind": "",
    "state": "",
    "cpu_load": "fraction",
    "node_temp_c": "celsius",
    "user": "",
    "job_id": "",
    "alerts": "",
    "timestamp": "epoch_ms",
}

_GPU_COL_RE = re.compile(r"^gpu(\d+)_(util|mem_used|mem_cap|power_w|temp_c)$")


@dataclass(frozen=True)
class ColumnSpec:
    name: str
    field: str  # canonical model field path, e.g. "gpu0.utilization"
    unit: str


@dataclass(frozen=True)
class SnapshotSchema:
    delimiter: str
    columns: tuple[ColumnSpec, ...]
    gpu_count: int = field(default=0)

    def header(self) -> list[str]:
        return [c.name for c in self.columns]

    def index_of(self, name: str) -> int | None:
        for i, col in enumerate(self.columns):
            if col.name == name:
                return i
        return None

    def validate(self) -> None:
        if self.delimiter not in ("\t", ","):
            raise SchemaError(f"delimiter must be tab or comma, got {self.delimiter!r}")
        names = [c.name for c in self.columns]
        for required in REQUIRED_COLUMNS:
            if names.count(required) != 1:
                raise SchemaError(
                    f"required column {required!r} must appear exactly once "
                    f"(found {names.count(required)})"
                )
        for i in range(self.gpu_count):
            for suffix in GPU_COLUMN_FIELDS:
                col = f"gpu{i}_{suffix}"
                if names.count(col) != 1:
                    raise SchemaError(
                        f"required column {col!r} must appear exactly once "
                        f"(found {names.count(col)})"
                    )


def _gpu_column_specs(gpu_count: int) -> list[ColumnSpec]:
    specs = []
    for i in range(gpu_count):
        for suffix, (model_field, unit) in GPU_COLUMN_FIELDS.items():
            specs.append(ColumnSpec(f"gpu{i}_{suffix}", f"gpu{i}.{model_field}", unit))
    return specs


def default_schema(gpu_count: int, delimiter: str = "\t") -> SnapshotSchema:
    """The full schema the simulator emits: all optional columns present."""
    specs = [
        ColumnSpec("node", "node_name", ""),
        ColumnSpec("kind", "kind", ""),
        ColumnSpec("state", "state", ""),
        ColumnSpec("cpu_load", "cpu_load", "fraction"),
        ColumnSpec("node_temp_c", "node_temp_c", "celsius"),
        ColumnSpec("user", "user", ""),
        ColumnSpec("job_id", "job_id", ""),
        ColumnSpec("alerts", "alerts", ""),
        ColumnSpec("timestamp", "timestamp", "epoch_ms"),
    ]
    specs.extend(_gpu_column_specs(gpu_count))
    schema = SnapshotSchema(delimiter=delimiter, columns=tuple(specs), gpu_count=gpu_count)
    schema.validate()
    return schema


def schema_from_header(cells: list[str], delimiter: str) -> SnapshotSchema:
    """Build and validate a schema from a file's header row.

    GPU slot count is inferred from ``gpu{i}_*`` column groups, which must be
    complete and contiguous from 0. Unknown column names are rejected so
    typos surface as schema errors instead of silently dropped data.
    """
    specs: list[ColumnSpec] = []
    gpu_indices: set[int] = set()
    seen_gpu_cols: set[str] = set()
    for name in cells:
        m = _GPU_COL_RE.match(name)
        if m:
            idx = int(m.group(1))
            gpu_indices.add(idx)
            if name in seen_gpu_cols:
                raise SchemaError(f"required column {name!r} must appear exactly once (found 2)")
            seen_gpu_cols.add(name)
            model_field, unit = GPU_COLUMN_FIELDS[m.group(2)]
            specs.append(ColumnSpec(name, f"gpu{idx}.{model_field}", unit))
        elif name in _NODE_COLUMN_UNITS:
            specs.append(
                ColumnSpec(name, "node_name" if name == "node" else name, _NODE_COLUMN_UNITS[name])
            )
        else:
            raise SchemaError(f"unknown column {name!r}")

    gpu_count = (max(gpu_indices) + 1) if gpu_indices else 0
    if gpu_indices and gpu_indices != set(range(gpu_count)):
        missing = sorted(set(range(gpu_count)) - gpu_indices)
        raise SchemaError(f"gpu column groups must be contiguous from 0; missing gpu{missing[0]}_*")
    for i in range(gpu_count):
        for suffix in GPU_COLUMN_FIELDS:
            col = f"gpu{i}_{suffix}"
            if col not in seen_gpu_cols:
                raise SchemaError(f"incomplete gpu column group: missing {col!r}")

    schema = SnapshotSchema(delimiter=delimiter, columns=tuple(specs), gpu_count=gpu_count)
    schema.validate()
    return schema


def schema_from_file(path) -> SnapshotSchema:
    """Load a schema from a file whose first line is the header row."""
    with open(path, encoding="utf-8") as fh:
        first = fh.readline().rstrip("\n")
    if not first.strip():
        raise SchemaError(f"{path}: schema file has no header row")
    delimiter = "\t" if "\t" in first else ","
    return schema_from_header(first.split(delimiter), delimiter)
