"""Scene encoding: pure shader-semantics encoders, frame-to-item
compilation, and per-frame property diffs."""

from .build import LayoutError, Scene, SceneError, frame_to_scene, scene_of
from .colors import (
    BLACK,
    GPU_METRIC_STOPS,
    GRAY,
    NODE_LOAD_STOPS,
    RED,
    Color,
    RedRegion,
    in_red_region,
    lerp_color,
)
from .diff import DiffError, RenderPropertyUpdate, StructuralChangeError, apply_updates, diff_updates
from .encoders import (
    EncodingPolicy,
    gpu_bar_encode,
    node_base_encode,
    outline_encode,
    power_bar_encode,
)
from .items import RenderItem, Transform
from .layout import LayoutConfig
from .templates import (
    DEFAULT_MESH_TRIANGLES,
    InstanceProps,
    MaterialTemplate,
    ShaderKind,
    TemplateError,
    default_registry,
)

__all__ = [
    "BLACK",
    "GPU_METRIC_STOPS",
    "GRAY",
    "NODE_LOAD_STOPS",
    "RED",
    "Color",
    "RedRegion",
    "in_red_region",
    "lerp_color",
    "LayoutError",
    "Scene",
    "SceneError",
    "frame_to_scene",
    "scene_of",
    "DiffError",
    "RenderPropertyUpdate",
    "StructuralChangeError",
    "apply_updates",
    "diff_updates",
    "EncodingPolicy",
    "gpu_bar_encode",
    "node_base_encode",
    "outline_encode",
    "power_bar_encode",
    "RenderItem",
    "Transform",
    "LayoutConfig",
    "DEFAULT_MESH_TRIANGLES",
    "InstanceProps",
    "MaterialTemplate",
    "ShaderKind",
    "TemplateError",
    "default_registry",
]
