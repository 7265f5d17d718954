"""Threshold alert rules over the telemetry model.

Rules name a metric path (``node_temp_c``, ``gpu*.temp_c``, ``gpu0.power_draw_w``,
...), a comparator and a threshold. Paths are validated when rules are
loaded -- a path that cannot resolve against the model is a configuration
error there, never a surprise at evaluation time.

Rules file format, one rule per line:
``rule_id<TAB>metric_path<TAB>comparator<TAB>threshold<TAB>severity``
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum

from ..model import Alert, NodeTelemetry, SnapshotFrame


class Comparator(str, Enum):
    GT = "gt"
    GE = "ge"
    LT = "lt"
    LE = "le"


class Severity(str, Enum):
    WARN = "warn"
    CRITICAL = "critical"


class AlertConfigError(ValueError):
    """Rule rejected at load time (bad path, comparator or threshold)."""


NODE_METRICS = {
    "cpu_load": "fraction",
    "node_temp_c": "celsius",
}

GPU_METRICS = {
    "utilization": "fraction",
    "mem_used_bytes": "bytes",
    "mem_capacity_bytes": "bytes",
    "mem_frac": "fraction",  # derived: used / capacity
    "power_draw_w": "watts",
    "temp_c": "celsius",
}

_GPU_PATH_RE = re.compile(r"^gpu(\*|\d+)\.(\w+)$")


@dataclass(frozen=True)
class AlertRule:
    rule_id: str
    metric_path: str
    comparator: Comparator
    threshold: float
    severity: Severity = Severity.WARN
    unit: str = ""

    def validate(self) -> None:
        if not self.rule_id:
            raise AlertConfigError("rule_id must be non-empty")
        if not math.isfinite(self.threshold):
            raise AlertConfigError(f"rule {self.rule_id!r}: threshold must be finite")
        metric_unit(self.metric_path)  # raises on unresolvable paths

    def fires(self, value: float) -> bool:
        if self.comparator is Comparator.GT:
            return value > self.threshold
        if self.comparator is Comparator.GE:
            return value >= self.threshold
        if self.comparator is Comparator.LT:
            return value < self.threshold
        return value <= self.threshold


def metric_unit(path: str) -> str:
    """Unit for a metric path; raises AlertConfigError if it cannot resolve."""
    if path in NODE_METRICS:
        return NODE_METRICS[path]
    m = _GPU_PATH_RE.match(path)
    if m and m.group(2) in GPU_METRICS:
        return GPU_METRICS[m.group(2)]
    raise AlertConfigError(f"metric path {path!r} does not resolve against the telemetry model")


def resolve_metric(node: NodeTelemetry, path: str) -> list[float]:
    """Values the path selects on this node; may be empty (e.g. gpu3 on a
    2-GPU node, or any gpu path on a CPU-only node)."""
    if path in NODE_METRICS:
        return [float(getattr(node, path))]
    m = _GPU_PATH_RE.match(path)
    if not m or m.group(2) not in GPU_METRICS:
        raise AlertConfigError(f"metric path {path!r} does not resolve against the telemetry model")
    selector, field = m.groups()
    gpus = node.gpus if selector == "*" else [
        gpu for gpu in node.gpus if gpu.gpu_index == int(selector)
    ]
    if field == "mem_frac":
        return [
            gpu.mem_used_bytes / gpu.mem_capacity_bytes if gpu.mem_capacity_bytes else 0.0
            for gpu in gpus
        ]
    return [float(getattr(gpu, field)) for gpu in gpus]


def evaluate_alerts(frame: SnapshotFrame, rules: list[AlertRule]) -> list[Alert]:
    """One alert per (node, rule) whose metric satisfies the comparator.

    When a gpu* path matches several GPUs the reported value is the extreme
    offender (max for gt/ge, min for lt/le). Output is sorted by
    (node, rule_id).
    """
    out: list[Alert] = []
    ordered_rules = sorted(rules, key=lambda r: r.rule_id)
    for node in frame.iter_nodes():
        for rule in ordered_rules:
            values = [v for v in resolve_metric(node, rule.metric_path) if rule.fires(v)]
            if not values:
                continue
            worst = max(values) if rule.comparator in (Comparator.GT, Comparator.GE) else min(values)
            out.append(
                Alert(
                    node=node.node_name,
                    rule_id=rule.rule_id,
                    value=worst,
                    timestamp=frame.timestamp,
                    severity=rule.severity.value,
                )
            )
    return out


def parse_rules_text(text: str) -> list[AlertRule]:
    rules = []
    seen = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 5:
            raise AlertConfigError(f"line {lineno}: expected 5 tab-separated fields, got {len(parts)}")
        rule_id, path, comparator, threshold, severity = parts
        try:
            rule = AlertRule(
                rule_id=rule_id,
                metric_path=path,
                comparator=Comparator(comparator),
                threshold=float(threshold),
                severity=Severity(severity),
                unit=metric_unit(path),
            )
        except ValueError as exc:
            raise AlertConfigError(f"line {lineno}: {exc}") from None
        rule.validate()
        if rule.rule_id in seen:
            raise AlertConfigError(f"line {lineno}: duplicate rule_id {rule.rule_id!r}")
        seen.add(rule.rule_id)
        rules.append(rule)
    return rules


def load_rules_file(path) -> list[AlertRule]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_rules_text(fh.read())


# Shipped defaults; thresholds are operator configuration, tune per site.
DEFAULT_ALERT_RULES = (
    AlertRule("gpu-temp-high", "gpu*.temp_c", Comparator.GT, 85.0, Severity.CRITICAL, "celsius"),
    AlertRule("node-temp-high", "node_temp_c", Comparator.GT, 75.0, Severity.WARN, "celsius"),
)
