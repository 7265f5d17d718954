"""Compile a telemetry frame into render items.

Decomposition per node:
  gpu_accelerated with g GPUs -> 1 base case + 3 bars per GPU
  (utilization, memory, power) + 1 outline per GPU + 1 node outline,
  so 1 + 3g + g + 1 items; cpu_only -> base + node outline, so 2.

Item ids are stable across frames and restarts:
  node/<name>/base
  node/<name>/outline
  node/<name>/gpu<j>/util | mem | power
  node/<name>/gpu<j>/outline
"""

from __future__ import annotations

from dataclasses import dataclass

from ..model import NodeState, SnapshotFrame
from .encoders import DEFAULT_POLICY, EncodingPolicy, outline_encode, power_bar_encode
from .items import RenderItem
from .layout import LayoutConfig, LayoutError
from .templates import InstanceProps, MaterialTemplate, default_registry

__all__ = ["LayoutError", "Scene", "SceneError", "frame_to_scene", "scene_of"]


class SceneError(ValueError):
    """Scene construction failed (bad registry or duplicate ids)."""


_REQUIRED_TEMPLATES = (
    "node-base/gpu",
    "node-base/cpu",
    "bar/gradient",
    "power-bar/default",
    "outline/red",
)


def frame_to_scene(
    frame: SnapshotFrame,
    layout: LayoutConfig | None = None,
    templates: dict[str, MaterialTemplate] | None = None,
    policy: EncodingPolicy = DEFAULT_POLICY,
) -> list[RenderItem]:
    """Render items for one frame, ordered by node name.

    Raises LayoutError when the layout cannot place a node in the frame,
    SceneError when the template registry lacks a required template.
    """
    if layout is None:
        layout = LayoutConfig()
    if templates is None:
        templates = default_registry()
    for required in _REQUIRED_TEMPLATES:
        if required not in templates:
            raise SceneError(f"template registry is missing {required!r}")
    layout.validate()
    power_template = templates["power-bar/default"]

    slots = layout.slot_map(list(frame.nodes))
    items: list[RenderItem] = []
    for node in frame.iter_nodes():
        name = node.node_name
        node_tf = layout.node_transform(slots[name])
        off = 1 if node.state is NodeState.OFF else 0
        idle = 1 if node.state is NodeState.IDLE else 0
        alert = 1 if node.alerts else 0
        gpu_count = len(node.gpus)

        items.append(
            RenderItem(
                item_id=f"node/{name}/base",
                mesh_id="node-case-gpu" if node.gpus else "node-case-cpu",
                template_id="node-base/gpu" if node.gpus else "node-base/cpu",
                instance=InstanceProps(
                    load=node.cpu_load,
                    idle_flag=idle,
                    off_flag=off,
                    alert_flag=alert,
                ),
                transform=node_tf,
            )
        )

        for gpu in node.gpus:
            j = gpu.gpu_index
            mem_frac = (
                gpu.mem_used_bytes / gpu.mem_capacity_bytes if gpu.mem_capacity_bytes else 0.0
            )
            power_fill, _, _ = power_bar_encode(gpu.power_draw_w, power_template)
            bars = (
                ("util", gpu.utilization, "bar/gradient"),
                ("mem", mem_frac, "bar/gradient"),
                ("power", power_fill, "power-bar/default"),
            )
            for k, (element, load, template_id) in enumerate(bars):
                items.append(
                    RenderItem(
                        item_id=f"node/{name}/gpu{j}/{element}",
                        mesh_id="metric-bar",
                        template_id=template_id,
                        instance=InstanceProps(load=load, idle_flag=idle, off_flag=off),
                        transform=layout.bar_transform(node_tf, j, k, gpu_count),
                    )
                )
            items.append(
                RenderItem(
                    item_id=f"node/{name}/gpu{j}/outline",
                    mesh_id="gpu-outline",
                    template_id="outline/red",
                    instance=InstanceProps(
                        outline_enabled=outline_encode(gpu.temp_c, policy.gpu_temp_tolerance_c),
                        idle_flag=idle,
                        off_flag=off,
                    ),
                    transform=layout.gpu_outline_transform(node_tf, j, gpu_count),
                )
            )

        items.append(
            RenderItem(
                item_id=f"node/{name}/outline",
                mesh_id="node-outline",
                template_id="outline/red",
                instance=InstanceProps(
                    outline_enabled=outline_encode(node.node_temp_c, policy.node_temp_tolerance_c),
                    idle_flag=idle,
                    off_flag=off,
                ),
                transform=layout.node_outline_transform(node_tf),
            )
        )
    return items


@dataclass(frozen=True)
class Scene:
    """A compiled frame: items plus the timestamp they encode."""

    timestamp: int
    items: tuple[RenderItem, ...]

    def by_id(self) -> dict[str, RenderItem]:
        return {item.item_id: item for item in self.items}


def scene_of(
    frame: SnapshotFrame,
    layout: LayoutConfig | None = None,
    templates: dict[str, MaterialTemplate] | None = None,
    policy: EncodingPolicy = DEFAULT_POLICY,
) -> Scene:
    return Scene(timestamp=frame.timestamp, items=tuple(frame_to_scene(frame, layout, templates, policy)))
