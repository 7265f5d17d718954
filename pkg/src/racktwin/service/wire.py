"""JSON wire format for frame packets and query payloads.

A subscription starts with one full packet (complete item list plus the
material templates needed to shade them) and continues with delta packets
carrying only changed per-instance properties. Every packet is one JSON
text message; all of one tick's changes travel in a single packet so a
subscriber never sees a half-applied frame.
"""

from __future__ import annotations

import json
from typing import Any, Mapping, Optional, Sequence

from ..batching import Batch, SceneStats
from ..model import Alert, GpuTelemetry, NodeTelemetry
from ..scene import Color, InstanceProps, MaterialTemplate, RenderItem, RenderPropertyUpdate, ShaderKind, Transform

PACKET_FULL = "full"
PACKET_DELTA = "delta"


class WireError(ValueError):
    """Malformed packet or payload."""


def _color_to_wire(color: Optional[Color]) -> Optional[list[float]]:
    return None if color is None else [color.r, color.g, color.b]


def _color_from_wire(value: Any) -> Optional[Color]:
    if value is None:
        return None
    if not isinstance(value, (list, tuple)) or len(value) != 3:
        raise WireError(f"expected [r, g, b], got {value!r}")
    return Color(float(value[0]), float(value[1]), float(value[2]))


def template_to_wire(template: MaterialTemplate) -> dict[str, Any]:
    return {
        "template_id": template.template_id,
        "shader_kind": template.shader_kind.value,
        "stop0": _color_to_wire(template.stop0),
        "stop1": _color_to_wire(template.stop1),
        "base_texture_id": template.base_texture_id,
        "min_w": template.min_w,
        "max_w": template.max_w,
        "normalized_large": template.normalized_large,
        "outline_color": _color_to_wire(template.outline_color),
        "thickness": template.thickness,
        "expand": template.expand,
    }


def template_from_wire(data: Mapping[str, Any]) -> MaterialTemplate:
    try:
        return MaterialTemplate(
            template_id=data["template_id"],
            shader_kind=ShaderKind(data["shader_kind"]),
            stop0=_color_from_wire(data.get("stop0")),
            stop1=_color_from_wire(data.get("stop1")),
            base_texture_id=data.get("base_texture_id"),
            min_w=data.get("min_w"),
            max_w=data.get("max_w"),
            normalized_large=data.get("normalized_large"),
            outline_color=_color_from_wire(data.get("outline_color")),
            thickness=data.get("thickness"),
            expand=data.get("expand"),
        )
    except (KeyError, ValueError) as exc:
        raise WireError(f"bad template payload: {exc}") from exc


def item_to_wire(item: RenderItem) -> dict[str, Any]:
    t = item.transform
    return {
        "item_id": item.item_id,
        "mesh_id": item.mesh_id,
        "template_id": item.template_id,
        "instance": {
            "load": item.instance.load,
            "outline_enabled": item.instance.outline_enabled,
            "idle_flag": item.instance.idle_flag,
            "off_flag": item.instance.off_flag,
            "alert_flag": item.instance.alert_flag,
        },
        "transform": [t.x, t.y, t.z, t.sx, t.sy, t.sz],
    }


def item_from_wire(data: Mapping[str, Any]) -> RenderItem:
    try:
        inst = data["instance"]
        tr = data["transform"]
        return RenderItem(
            item_id=data["item_id"],
            mesh_id=data["mesh_id"],
            template_id=data["template_id"],
            instance=InstanceProps(
                load=float(inst["load"]),
                outline_enabled=int(inst["outline_enabled"]),
                idle_flag=int(inst["idle_flag"]),
                off_flag=int(inst["off_flag"]),
                alert_flag=int(inst["alert_flag"]),
            ),
            transform=Transform(
                x=float(tr[0]), y=float(tr[1]), z=float(tr[2]),
                sx=float(tr[3]), sy=float(tr[4]), sz=float(tr[5]),
            ),
        )
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        raise WireError(f"bad item payload: {exc}") from exc


def update_to_wire(update: RenderPropertyUpdate) -> dict[str, Any]:
    return {
        "item_id": update.item_id,
        "material_slot": update.material_slot,
        "props": dict(update.props),
    }


def update_from_wire(data: Mapping[str, Any]) -> RenderPropertyUpdate:
    try:
        update = RenderPropertyUpdate(
            item_id=data["item_id"],
            material_slot=int(data["material_slot"]),
            props=dict(data["props"]),
        )
    except (KeyError, TypeError) as exc:
        raise WireError(f"bad update payload: {exc}") from exc
    update.validate()
    return update


def alert_to_wire(alert: Alert) -> dict[str, Any]:
    return {
        "node": alert.node,
        "rule_id": alert.rule_id,
        "value": alert.value,
        "timestamp": alert.timestamp,
        "severity": alert.severity,
    }


def stats_to_wire(naive: SceneStats, instanced: SceneStats) -> dict[str, Any]:
    return {
        "batch_count": instanced.batch_count,
        "potential_draw_calls": instanced.potential_draw_calls,
        "triangle_count": instanced.triangle_count,
        "draw_submissions": instanced.draw_submissions,
        "naive_batch_count": naive.batch_count,
        "naive_triangle_count": naive.triangle_count,
        "clamp_count": instanced.clamp_count,
        "error_count": instanced.error_count,
    }


def gpu_to_wire(gpu: GpuTelemetry) -> dict[str, Any]:
    return {
        "gpu_index": gpu.gpu_index,
        "utilization": gpu.utilization,
        "mem_used_bytes": gpu.mem_used_bytes,
        "mem_capacity_bytes": gpu.mem_capacity_bytes,
        "power_draw_w": gpu.power_draw_w,
        "temp_c": gpu.temp_c,
    }


def node_to_wire(node: NodeTelemetry) -> dict[str, Any]:
    return {
        "node_name": node.node_name,
        "kind": node.kind.value,
        "state": node.state.value,
        "cpu_load": node.cpu_load,
        "node_temp_c": node.node_temp_c,
        "alerts": list(node.alerts),
        "user": node.user,
        "job_id": node.job_id,
        "gpus": [gpu_to_wire(g) for g in node.gpus],
    }


def batch_summary(batches: Sequence[Batch]) -> list[dict[str, Any]]:
    return [
        {
            "mesh_id": b.mesh_id,
            "template_id": b.template_id,
            "instance_count": b.instance_count,
        }
        for b in batches
    ]


def full_packet(
    timestamp: int,
    items: Sequence[RenderItem],
    batches: Sequence[Batch],
    alerts: Sequence[Alert],
    stats: dict[str, Any],
    templates: Mapping[str, MaterialTemplate],
) -> dict[str, Any]:
    return {
        "kind": PACKET_FULL,
        "timestamp": timestamp,
        "items": [item_to_wire(i) for i in items],
        "batches": batch_summary(batches),
        "templates": {tid: template_to_wire(t) for tid, t in sorted(templates.items())},
        "alerts": [alert_to_wire(a) for a in alerts],
        "stats": stats,
    }


def delta_packet(
    timestamp: int,
    updates: Sequence[RenderPropertyUpdate],
    alerts: Sequence[Alert],
    stats: dict[str, Any],
) -> dict[str, Any]:
    return {
        "kind": PACKET_DELTA,
        "timestamp": timestamp,
        "updates": [update_to_wire(u) for u in updates],
        "alerts": [alert_to_wire(a) for a in alerts],
        "stats": stats,
    }


def encode_packet(packet: Mapping[str, Any]) -> str:
    """One packet, one JSON text message."""
    return json.dumps(packet, separators=(",", ":"), sort_keys=True)


def decode_packet(text: str) -> dict[str, Any]:
    try:
        packet = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WireError(f"packet is not valid JSON: {exc}") from exc
    if not isinstance(packet, dict):
        raise WireError("packet must be a JSON object")
    kind = packet.get("kind")
    if kind not in (PACKET_FULL, PACKET_DELTA):
        raise WireError(f"unknown packet kind: {kind!r}")
    if "timestamp" not in packet:
        raise WireError("packet missing timestamp")
    required = "items" if kind == PACKET_FULL else "updates"
    if required not in packet:
        raise WireError(f"{kind} packet missing {required!r}")
    return packet


def items_from_packet(packet: Mapping[str, Any]) -> list[RenderItem]:
    return [item_from_wire(d) for d in packet["items"]]


def updates_from_packet(packet: Mapping[str, Any]) -> list[RenderPropertyUpdate]:
    return [update_from_wire(d) for d in packet["updates"]]
