"""Declarative scene configuration.

One JSON file describes everything a deployment varies: fleet shape for
the synthetic source, rack layout geometry, gradient stops, power-bar
calibration, and outline tolerances. Every key is optional and falls back
to the built-in defaults; unknown sections or keys are rejected so typos
fail loudly instead of silently keeping a default.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Callable, Mapping

from .ingest import SimulatorConfig
from .scene import Color, EncodingPolicy, LayoutConfig, MaterialTemplate, default_registry


class SceneConfigError(ValueError):
    """Malformed scene configuration file or value."""


def _stops(value: Any) -> tuple[Color, Color]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise SceneConfigError(f"expected two [r, g, b] stops, got {value!r}")
    out = []
    for triple in value:
        if not isinstance(triple, (list, tuple)) or len(triple) != 3:
            raise SceneConfigError(f"expected an [r, g, b] triple, got {triple!r}")
        color = Color(float(triple[0]), float(triple[1]), float(triple[2]))
        color.validate()
        out.append(color)
    return out[0], out[1]


def _names(value: Any) -> tuple[str, ...]:
    if not isinstance(value, (list, tuple)) or not all(isinstance(v, str) for v in value):
        raise SceneConfigError(f"expected a list of node names, got {value!r}")
    return tuple(value)


# section -> key -> (converter, documentation line). This table is both
# the validator and the text behind the --schema flag.
SCHEMA: dict[str, dict[str, tuple[Callable[[Any], Any], str]]] = {
    "fleet": {
        "gpu_nodes": (int, "GPU-accelerated node count"),
        "gpus_per_node": (int, "GPUs in each accelerated node"),
        "cpu_nodes": (int, "additional CPU-only node count"),
        "tick_hz": (float, "snapshot cadence of the synthetic source"),
        "seed": (int, "synthetic source seed; same seed, same stream"),
        "idle_fraction": (float, "share of nodes parked idle"),
        "off_fraction": (float, "share of nodes powered off"),
        "hot_gpu_fraction": (float, "share of GPUs driven past temperature tolerance"),
        "base_timestamp_ms": (int, "timestamp of tick 0 in epoch milliseconds"),
    },
    "layout": {
        "nodes_per_stack": (int, "vertical nodes per stack"),
        "stacks_per_row": (int, "stacks per room row"),
        "node_width": (float, "node case width in scene units"),
        "node_height": (float, "node case height in scene units"),
        "node_depth": (float, "node case depth in scene units"),
        "stack_gap": (float, "horizontal gap between stacks"),
        "row_gap": (float, "aisle gap between rows"),
        "bar_width": (float, "metric bar width"),
        "bar_height": (float, "metric bar height"),
        "bar_depth": (float, "metric bar depth"),
        "node_order": (_names, "pinned node-name order; omit to sort per frame"),
    },
    "power": {
        "min_w": (float, "power-bar gradient floor in watts"),
        "max_w": (float, "power-bar gradient ceiling in watts"),
        "normalized_large": (float, "normalized draw above which the bar flags excess"),
    },
    "gradients": {
        "node_load": (_stops, "CPU-load gradient stops, two [r, g, b] triples"),
        "gpu_metric": (_stops, "GPU metric gradient stops, two [r, g, b] triples"),
    },
    "policy": {
        "gpu_temp_tolerance_c": (float, "GPU outline threshold in deg C"),
        "node_temp_tolerance_c": (float, "node outline threshold in deg C"),
    },
}

# config key -> SimulatorConfig field, where the names differ
_FLEET_FIELDS = {
    "gpu_nodes": "node_count",
    "cpu_nodes": "cpu_node_count",
}


@dataclass(frozen=True)
class SceneSpec:
    """Everything needed to turn telemetry into render items."""

    simulator: SimulatorConfig
    layout: LayoutConfig
    templates: dict[str, MaterialTemplate]
    policy: EncodingPolicy


def _parse_section(name: str, raw: Mapping[str, Any]) -> dict[str, Any]:
    if not isinstance(raw, Mapping):
        raise SceneConfigError(f"section '{name}' must be an object")
    keys = SCHEMA[name]
    out = {}
    for key, value in raw.items():
        if key not in keys:
            known = ", ".join(sorted(keys))
            raise SceneConfigError(f"unknown key '{name}.{key}' (known: {known})")
        convert = keys[key][0]
        try:
            out[key] = convert(value)
        except SceneConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise SceneConfigError(f"bad value for '{name}.{key}': {exc}") from exc
    return out


def parse_scene_config(data: Mapping[str, Any]) -> SceneSpec:
    """Build a SceneSpec from an already-parsed configuration mapping."""
    if not isinstance(data, Mapping):
        raise SceneConfigError("scene config must be a JSON object")
    for section in data:
        if section not in SCHEMA:
            known = ", ".join(sorted(SCHEMA))
            raise SceneConfigError(f"unknown section '{section}' (known: {known})")

    fleet = _parse_section("fleet", data.get("fleet", {}))
    layout_kw = _parse_section("layout", data.get("layout", {}))
    power = _parse_section("power", data.get("power", {}))
    gradients = _parse_section("gradients", data.get("gradients", {}))
    policy_kw = _parse_section("policy", data.get("policy", {}))

    sim_kw = {_FLEET_FIELDS.get(k, k): v for k, v in fleet.items()}
    try:
        simulator = SimulatorConfig(**sim_kw)
        simulator.validate()
        layout = LayoutConfig(**layout_kw)
        layout.validate()
        templates = default_registry(
            power_min_w=power.get("min_w", 0.0),
            power_max_w=power.get("max_w", 400.0),
            normalized_large=power.get("normalized_large", 0.9),
        )
        policy = EncodingPolicy(**policy_kw)
    except SceneConfigError:
        raise
    except ValueError as exc:
        raise SceneConfigError(str(exc)) from exc

    if "node_load" in gradients:
        stop0, stop1 = gradients["node_load"]
        for tid in ("node-base/gpu", "node-base/cpu"):
            templates[tid] = replace(templates[tid], stop0=stop0, stop1=stop1)
    if "gpu_metric" in gradients:
        stop0, stop1 = gradients["gpu_metric"]
        for tid in ("bar/gradient", "power-bar/default"):
            templates[tid] = replace(templates[tid], stop0=stop0, stop1=stop1)
    for template in templates.values():
        template.validate()

    return SceneSpec(simulator=simulator, layout=layout, templates=templates, policy=policy)


def load_scene_config(path: str | os.PathLike) -> SceneSpec:
    """Read and validate a scene configuration file."""
    p = Path(path)
    if not p.exists():
        raise SceneConfigError(f"scene config not found: {p}")
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SceneConfigError(f"{p}: invalid JSON: {exc}") from exc
    try:
        return parse_scene_config(data)
    except SceneConfigError as exc:
        raise SceneConfigError(f"{p}: {exc}") from exc


def default_scene_spec() -> SceneSpec:
    return parse_scene_config({})


def reference_scene_path() -> Path:
    """The shipped full-machine-room configuration."""
    return Path(__file__).parent / "data" / "reference_scene.json"


def schema_text() -> str:
    """Human-readable key listing for the --schema flag."""
    lines = ["Scene configuration keys (all optional):", ""]
    for section in sorted(SCHEMA):
        lines.append(f"[{section}]")
        for key in sorted(SCHEMA[section]):
            lines.append(f"  {key:<22}{SCHEMA[section][key][1]}")
        lines.append("")
    return "\n".join(lines)
