"""Render item and transform types."""

from __future__ import annotations

from dataclasses import dataclass

from .templates import InstanceProps


@dataclass(frozen=True)
class Transform:
    x: float
    y: float
    z: float
    sx: float = 1.0
    sy: float = 1.0
    sz: float = 1.0


@dataclass(frozen=True)
class RenderItem:
    """One drawable unit: a mesh instance bound to a material template.

    item_id is a stable string (node/<name>/<element>) so diffs survive
    process restarts.
    """

    item_id: str
    mesh_id: str
    template_id: str
    instance: InstanceProps
    transform: Transform
