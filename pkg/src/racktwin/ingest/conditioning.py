"""Conditioning: attach alerts to a frame and compute the changed-node set.

The changed set is what lets the frame pipeline touch only nodes whose
visuals can actually differ this tick. Alert ids fired by the rules are
merged into each node's alert tuple, so an alert appearing or clearing
counts as a change even when the raw readings are identical.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..model import Alert, SnapshotFrame
from .alerts import AlertRule, evaluate_alerts


@dataclass(frozen=True)
class ConditionedFrame:
    frame: SnapshotFrame            # nodes carry merged alert ids
    alerts: tuple[Alert, ...]
    changed: frozenset[str]


def _enrich(frame: SnapshotFrame, rules: list[AlertRule]) -> tuple[SnapshotFrame, tuple[Alert, ...]]:
    alerts = tuple(evaluate_alerts(frame, rules))
    fired: dict[str, set[str]] = {}
    for alert in alerts:
        fired.setdefault(alert.node, set()).add(alert.rule_id)
    nodes = {}
    for name, node in frame.nodes.items():
        ids = set(node.alerts) | fired.get(name, set())
        nodes[name] = node.with_alerts(tuple(sorted(ids))) if ids else node.with_alerts(())
    return SnapshotFrame(timestamp=frame.timestamp, nodes=nodes, env=frame.env), alerts


def condition(
    frame: SnapshotFrame,
    rules: list[AlertRule],
    previous: SnapshotFrame | None = None,
) -> ConditionedFrame:
    """Evaluate alerts and diff against the previous frame.

    ``changed`` holds every node whose enriched telemetry differs from its
    enriched counterpart in ``previous`` (plus nodes appearing/disappearing);
    with no previous frame, every node counts as changed. Enrichment is
    idempotent, so feeding a ConditionedFrame's frame back in as ``previous``
    is the intended steady-state usage.
    """
    enriched, alerts = _enrich(frame, rules)
    if previous is None:
        changed = frozenset(enriched.nodes)
    else:
        prev_enriched, _ = _enrich(previous, rules)
        changed = frozenset(
            name
            for name in enriched.nodes.keys() | prev_enriched.nodes.keys()
            if enriched.nodes.get(name) != prev_enriched.nodes.get(name)
        )
    return ConditionedFrame(frame=enriched, alerts=alerts, changed=changed)
