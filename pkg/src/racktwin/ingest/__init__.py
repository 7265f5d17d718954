"""Telemetry ingestion: delimited snapshot parsing, synthetic stream
simulation, conditioning, and alert-rule evaluation."""

from .alerts import (
    DEFAULT_ALERT_RULES,
    AlertRule,
    Comparator,
    Severity,
    evaluate_alerts,
    load_rules_file,
    parse_rules_text,
)
from .conditioning import ConditionedFrame, condition
from .parser import ParseResult, RowError, SchemaError, parse_snapshot, serialize_snapshot
from .schema import ColumnSpec, SnapshotSchema, default_schema, schema_from_header
from .simulator import DriftModel, SimulatorConfig, frame_stream, simulate_tick

__all__ = [
    "DEFAULT_ALERT_RULES",
    "AlertRule",
    "Comparator",
    "Severity",
    "evaluate_alerts",
    "load_rules_file",
    "parse_rules_text",
    "ConditionedFrame",
    "condition",
    "ParseResult",
    "RowError",
    "SchemaError",
    "parse_snapshot",
    "serialize_snapshot",
    "ColumnSpec",
    "SnapshotSchema",
    "default_schema",
    "schema_from_header",
    "DriftModel",
    "SimulatorConfig",
    "frame_stream",
    "simulate_tick",
]
