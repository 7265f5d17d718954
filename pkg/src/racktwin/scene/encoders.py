"""Pure metric-to-visual encoders.

Each function mirrors one shader's behavior on the CPU side: given the
normalized metric and the material parameters it returns the color, fill
fraction, and flags the instanced renderer will apply. All functions are
pure; red appears only through the alert strip, the over-temperature
outline, and the power overload segment, never from a gradient sample.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..model import NodeState
from .colors import BLACK, GPU_METRIC_STOPS, GRAY, NODE_LOAD_STOPS, Color, lerp_color
from .templates import MaterialTemplate, ShaderKind, TemplateError


@dataclass(frozen=True)
class EncodingPolicy:
    """Thresholds for the outline encoders.

    Tolerances are strict boundaries: a reading exactly at the tolerance
    does not raise the outline.
    """

    gpu_temp_tolerance_c: float = 85.0
    node_temp_tolerance_c: float = 75.0


DEFAULT_POLICY = EncodingPolicy()


def node_base_encode(
    state: NodeState,
    cpu_load: float,
    has_alert: bool,
    stops: tuple[Color, Color] = NODE_LOAD_STOPS,
) -> tuple[Color, bool]:
    """Base color of a node case plus its alert strip flag.

    Off nodes are black and idle nodes gray regardless of load; active
    nodes sample the load gradient. The alert strip tracks has_alert in
    every state so an alerting off node still shows its strip.
    """
    if state is NodeState.OFF:
        return BLACK, has_alert
    if state is NodeState.IDLE:
        return GRAY, has_alert
    return lerp_color(stops[0], stops[1], cpu_load), has_alert


def gpu_bar_encode(
    load: float,
    stops: tuple[Color, Color] = GPU_METRIC_STOPS,
) -> tuple[float, Color]:
    """Fill fraction and gradient color for a utilization/memory bar.

    The returned fill is the visible portion; the remainder of the bar is
    masked to the background.
    """
    return load, lerp_color(stops[0], stops[1], load)


def power_bar_encode(draw_w: float, template: MaterialTemplate) -> tuple[float, Color, bool]:
    """Fill, color, and overload flag for a power draw bar.

    The draw is normalized against the template's calibrated range and
    clamped into [0,1]. When the normalized value exceeds the template's
    normalized_large (strictly), the overload flag asks the renderer to
    paint the portion above that threshold red.
    """
    if template.shader_kind is not ShaderKind.POWER_BAR:
        raise TemplateError(
            f"template {template.template_id!r} is {template.shader_kind.value}, not power_bar"
        )
    normalized = (draw_w - template.min_w) / (template.max_w - template.min_w)
    if normalized < 0.0:
        normalized = 0.0
    elif normalized > 1.0:
        normalized = 1.0
    color = lerp_color(template.stop0, template.stop1, normalized)
    overload = normalized > template.normalized_large
    return normalized, color, overload


def outline_encode(temp_c: float, tolerance_c: float) -> int:
    """1 when the temperature strictly surpasses the tolerance, else 0."""
    return 1 if temp_c > tolerance_c else 0
