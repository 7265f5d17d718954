"""Declarative scene config: defaults, overrides, and rejection messages."""

import json

import pytest

from racktwin.scene import default_registry
from racktwin.sceneconfig import (
    SceneConfigError,
    default_scene_spec,
    load_scene_config,
    parse_scene_config,
    reference_scene_path,
    schema_text,
)


def test_empty_config_equals_defaults():
    spec = parse_scene_config({})
    assert spec.simulator.node_count == 318
    assert spec.simulator.cpu_node_count == 0
    assert spec.layout.nodes_per_stack == 18
    assert spec.templates == default_registry()
    assert spec.policy.gpu_temp_tolerance_c == 85.0


def test_reference_scene_ships_with_the_package():
    spec = load_scene_config(reference_scene_path())
    assert spec.simulator.node_count == 318
    assert spec.simulator.gpus_per_node == 2
    assert spec.simulator.cpu_node_count == 2810
    assert spec.simulator.total_nodes == 3128


def test_fleet_and_power_overrides(tmp_path):
    path = tmp_path / "scene.json"
    path.write_text(
        json.dumps(
            {
                "fleet": {"gpu_nodes": 4, "gpus_per_node": 8, "seed": 99},
                "power": {"max_w": 700.0, "normalized_large": 0.8},
            }
        )
    )
    spec = load_scene_config(path)
    assert spec.simulator.node_count == 4
    assert spec.simulator.gpus_per_node == 8
    assert spec.simulator.seed == 99
    power = spec.templates["power-bar/default"]
    assert power.max_w == 700.0
    assert power.normalized_large == 0.8


def test_gradient_override_rewrites_both_bar_templates():
    spec = parse_scene_config(
        {"gradients": {"gpu_metric": [[0.1, 0.2, 0.3], [0.9, 0.8, 0.7]]}}
    )
    for tid in ("bar/gradient", "power-bar/default"):
        assert spec.templates[tid].stop0.as_tuple() == (0.1, 0.2, 0.3)
        assert spec.templates[tid].stop1.as_tuple() == (0.9, 0.8, 0.7)
    # Node base gradient is untouched by a gpu_metric override.
    assert spec.templates["node-base/gpu"] == default_registry()["node-base/gpu"]


def test_unknown_section_is_named_in_the_error():
    with pytest.raises(SceneConfigError, match="unknown section 'paint'"):
        parse_scene_config({"paint": {}})


def test_unknown_key_is_named_with_its_section():
    with pytest.raises(SceneConfigError, match="fleet.gpu_node"):
        parse_scene_config({"fleet": {"gpu_node": 10}})


def test_bad_gradient_shape_is_rejected():
    with pytest.raises(SceneConfigError, match="two"):
        parse_scene_config({"gradients": {"node_load": [[0, 0, 0]]}})
    with pytest.raises(SceneConfigError, match="triple"):
        parse_scene_config({"gradients": {"node_load": [[0, 0], [1, 1, 1]]}})


def test_out_of_range_gradient_component_is_rejected():
    with pytest.raises(SceneConfigError):
        parse_scene_config({"gradients": {"node_load": [[0, 0, 0], [2.0, 1, 1]]}})


def test_invalid_power_calibration_is_rejected():
    with pytest.raises(SceneConfigError, match="min_w"):
        parse_scene_config({"power": {"min_w": 500.0, "max_w": 400.0}})


def test_missing_file_and_bad_json(tmp_path):
    with pytest.raises(SceneConfigError, match="not found"):
        load_scene_config(tmp_path / "nope.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(SceneConfigError, match="invalid JSON"):
        load_scene_config(bad)


def test_schema_text_mentions_every_key():
    text = schema_text()
    for section, keys in (
        ("fleet", ("gpu_nodes", "cpu_nodes", "seed")),
        ("layout", ("nodes_per_stack", "node_order")),
        ("power", ("normalized_large",)),
        ("gradients", ("node_load", "gpu_metric")),
        ("policy", ("gpu_temp_tolerance_c",)),
    ):
        assert f"[{section}]" in text
        for key in keys:
            assert key in text


def test_default_spec_builds_a_scene():
    from racktwin.ingest import simulate_tick
    from racktwin.scene import frame_to_scene

    spec = default_scene_spec()
    frame = simulate_tick(spec.simulator, 0)
    items = frame_to_scene(frame, layout=spec.layout, templates=spec.templates, policy=spec.policy)
    assert len(items) == 318 * 10
