"""Spatial placement of nodes and their sub-elements.

Nodes fill stacks bottom-up in sorted-name order, stacks fill rows, rows
fill the floor. All transforms are pure arithmetic on the node's position
index, so placement is deterministic and needs no stored state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .items import Transform


class LayoutError(ValueError):
    """A frame references a node the layout cannot place."""


@dataclass(frozen=True)
class LayoutConfig:
    """Rack/stack grid parameters.

    node_order, when given, pins each node name to a fixed grid slot;
    frames containing names outside it are rejected. When omitted, slots
    are assigned to sorted node names per frame.
    """

    nodes_per_stack: int = 18
    stacks_per_row: int = 16
    node_width: float = 1.0
    node_height: float = 0.45
    node_depth: float = 0.9
    stack_gap: float = 0.35
    row_gap: float = 1.6
    bar_width: float = 0.09
    bar_height: float = 0.3
    bar_depth: float = 0.03
    node_order: Optional[tuple[str, ...]] = None

    def validate(self) -> None:
        if self.nodes_per_stack < 1 or self.stacks_per_row < 1:
            raise LayoutError("nodes_per_stack and stacks_per_row must be >= 1")
        if self.node_order is not None and len(set(self.node_order)) != len(self.node_order):
            raise LayoutError("node_order contains duplicate names")

    def slot_map(self, names: list[str]) -> dict[str, int]:
        """Grid slot per node name; raises for names without a placement."""
        if self.node_order is None:
            return {name: i for i, name in enumerate(sorted(names))}
        order = {name: i for i, name in enumerate(self.node_order)}
        missing = [n for n in names if n not in order]
        if missing:
            raise LayoutError(f"node {missing[0]!r} has no layout placement")
        return {name: order[name] for name in names}

    def node_transform(self, slot: int) -> Transform:
        stack, level = divmod(slot, self.nodes_per_stack)
        row, col = divmod(stack, self.stacks_per_row)
        return Transform(
            x=col * (self.node_width + self.stack_gap),
            y=level * self.node_height,
            z=row * (self.node_depth + self.row_gap),
            sx=self.node_width,
            sy=self.node_height,
            sz=self.node_depth,
        )

    def bar_transform(self, node: Transform, gpu_index: int, bar_index: int, gpus: int) -> Transform:
        """Bars sit on the node's front face, grouped 3 per GPU."""
        slots = max(1, gpus * 3)
        k = gpu_index * 3 + bar_index
        left = node.x - self.node_width / 2 + self.bar_width
        pitch = (self.node_width - 2 * self.bar_width) / slots
        return Transform(
            x=left + (k + 0.5) * pitch,
            y=node.y,
            z=node.z - self.node_depth / 2 - self.bar_depth,
            sx=self.bar_width,
            sy=self.bar_height,
            sz=self.bar_depth,
        )

    def gpu_outline_transform(self, node: Transform, gpu_index: int, gpus: int) -> Transform:
        """Shell around a GPU's bar group."""
        slots = max(1, gpus)
        left = node.x - self.node_width / 2 + self.bar_width
        pitch = (self.node_width - 2 * self.bar_width) / slots
        return Transform(
            x=left + (gpu_index + 0.5) * pitch,
            y=node.y,
            z=node.z - self.node_depth / 2 - self.bar_depth,
            sx=pitch,
            sy=self.bar_height * 1.15,
            sz=self.bar_depth * 1.5,
        )

    def node_outline_transform(self, node: Transform) -> Transform:
        return Transform(
            x=node.x,
            y=node.y,
            z=node.z,
            sx=node.sx * 1.04,
            sy=node.sy * 1.04,
            sz=node.sz * 1.04,
        )
