"""Material templates and per-instance properties.

The split between the two types is what makes instanced batching legal:
items sharing a (mesh_id, template_id) pair may differ only in
InstanceProps and transform, so a batch can render them in one draw. Any
parameter that must differ between two items forces a second template and
with it a second batch.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from enum import Enum
from typing import Optional

from .colors import GPU_METRIC_STOPS, NODE_LOAD_STOPS, RED, Color


class ShaderKind(str, Enum):
    NODE_BASE = "node_base"
    GPU_BAR = "gpu_bar"
    POWER_BAR = "power_bar"
    OUTLINE = "outline"


class TemplateError(ValueError):
    """A material template violates its parameter invariants."""


@dataclass(frozen=True)
class MaterialTemplate:
    """Per-material shader parameters, immutable and shared by many items.

    Which fields apply depends on shader_kind:
      node_base - base_texture_id, gradient stops
      gpu_bar   - gradient stops
      power_bar - gradient stops, min_w, max_w, normalized_large
      outline   - outline_color, thickness, expand
    """

    template_id: str
    shader_kind: ShaderKind
    stop0: Optional[Color] = None
    stop1: Optional[Color] = None
    base_texture_id: Optional[str] = None
    min_w: Optional[float] = None
    max_w: Optional[float] = None
    normalized_large: Optional[float] = None
    outline_color: Optional[Color] = None
    thickness: Optional[float] = None
    expand: Optional[float] = None

    def validate(self) -> None:
        if not self.template_id:
            raise TemplateError("template_id must be non-empty")
        kind = self.shader_kind
        if kind in (ShaderKind.NODE_BASE, ShaderKind.GPU_BAR, ShaderKind.POWER_BAR):
            if self.stop0 is None or self.stop1 is None:
                raise TemplateError(f"{self.template_id}: gradient stops required for {kind.value}")
            self.stop0.validate()
            self.stop1.validate()
        if kind is ShaderKind.NODE_BASE and not self.base_texture_id:
            raise TemplateError(f"{self.template_id}: node_base requires base_texture_id")
        if kind is ShaderKind.POWER_BAR:
            if self.min_w is None or self.max_w is None or self.normalized_large is None:
                raise TemplateError(
                    f"{self.template_id}: power_bar requires min_w, max_w, normalized_large"
                )
            if not self.min_w < self.max_w:
                raise TemplateError(
                    f"{self.template_id}: min_w must be < max_w ({self.min_w} vs {self.max_w})"
                )
            if not 0.0 < self.normalized_large <= 1.0:
                raise TemplateError(
                    f"{self.template_id}: normalized_large out of (0,1]: {self.normalized_large}"
                )
        if kind is ShaderKind.OUTLINE:
            if self.outline_color is None or self.thickness is None:
                raise TemplateError(f"{self.template_id}: outline requires outline_color, thickness")
            if self.thickness <= 0:
                raise TemplateError(f"{self.template_id}: thickness must be > 0")


@dataclass(frozen=True)
class InstanceProps:
    """Per-instance shader inputs; the unit of streaming deltas.

    load carries the normalized metric the shader visualizes (CPU load,
    GPU utilization, memory fraction, or normalized power draw). The flags
    are 0/1 floats as a GPU instance buffer would hold them.
    """

    load: float = 0.0
    outline_enabled: int = 0
    idle_flag: int = 0
    off_flag: int = 0
    alert_flag: int = 0

    def validate(self) -> None:
        if not 0.0 <= self.load <= 1.0:
            raise TemplateError(f"load out of [0,1]: {self.load}")
        for name in ("outline_enabled", "idle_flag", "off_flag", "alert_flag"):
            if getattr(self, name) not in (0, 1):
                raise TemplateError(f"{name} must be 0 or 1")
        if self.idle_flag and self.off_flag:
            raise TemplateError("idle_flag and off_flag are mutually exclusive")


PROP_FIELDS = tuple(f.name for f in fields(InstanceProps))


# triangle budgets for the shipped meshes (box-ish cases, thin bars, shells)
DEFAULT_MESH_TRIANGLES = {
    "node-case-gpu": 228,
    "node-case-cpu": 180,
    "metric-bar": 12,
    "gpu-outline": 60,
    "node-outline": 120,
}


def default_registry(
    power_min_w: float = 0.0,
    power_max_w: float = 400.0,
    normalized_large: float = 0.9,
) -> dict[str, MaterialTemplate]:
    """The standard template set; power calibration is configurable."""
    templates = [
        MaterialTemplate(
            template_id="node-base/gpu",
            shader_kind=ShaderKind.NODE_BASE,
            base_texture_id="case-gpu-albedo",
            stop0=NODE_LOAD_STOPS[0],
            stop1=NODE_LOAD_STOPS[1],
        ),
        MaterialTemplate(
            template_id="node-base/cpu",
            shader_kind=ShaderKind.NODE_BASE,
            base_texture_id="case-cpu-albedo",
            stop0=NODE_LOAD_STOPS[0],
            stop1=NODE_LOAD_STOPS[1],
        ),
        MaterialTemplate(
            template_id="bar/gradient",
            shader_kind=ShaderKind.GPU_BAR,
            stop0=GPU_METRIC_STOPS[0],
            stop1=GPU_METRIC_STOPS[1],
        ),
        MaterialTemplate(
            template_id="power-bar/default",
            shader_kind=ShaderKind.POWER_BAR,
            stop0=GPU_METRIC_STOPS[0],
            stop1=GPU_METRIC_STOPS[1],
            min_w=power_min_w,
            max_w=power_max_w,
            normalized_large=normalized_large,
        ),
        MaterialTemplate(
            template_id="outline/red",
            shader_kind=ShaderKind.OUTLINE,
            outline_color=RED,
            thickness=0.03,
            expand=1.04,
        ),
    ]
    for template in templates:
        template.validate()
    return {t.template_id: t for t in templates}
