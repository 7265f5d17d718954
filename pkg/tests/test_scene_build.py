"""Tests for frame-to-scene compilation."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from racktwin.ingest import SimulatorConfig, simulate_tick
from racktwin.model import GpuTelemetry, NodeKind, NodeState, NodeTelemetry, SnapshotFrame
from racktwin.scene import (
    EncodingPolicy,
    LayoutConfig,
    LayoutError,
    SceneError,
    default_registry,
    frame_to_scene,
)


def node_with_gpus(name, gpu_count, state=NodeState.ACTIVE, gpu_temp=60.0, node_temp=50.0, alerts=()):
    active = state is NodeState.ACTIVE
    gpus = tuple(
        GpuTelemetry(
            gpu_index=j,
            utilization=0.5 if active else 0.0,
            mem_used_bytes=2**29 if active else 0,
            mem_capacity_bytes=2**31,
            power_draw_w=200.0 if active else 0.0,
            temp_c=gpu_temp,
        )
        for j in range(gpu_count)
    )
    return NodeTelemetry(
        node_name=name,
        kind=NodeKind.GPU_ACCELERATED if gpu_count else NodeKind.CPU_ONLY,
        state=state,
        cpu_load=0.4 if active else 0.0,
        node_temp_c=node_temp,
        alerts=tuple(alerts),
        gpus=gpus,
    )


def frame_of(*nodes):
    return SnapshotFrame(timestamp=0, nodes={n.node_name: n for n in nodes})


def expected_item_count(gpu_nodes, gpus_per_node, cpu_nodes=0):
    return gpu_nodes * (1 + 3 * gpus_per_node + gpus_per_node + 1) + cpu_nodes * 2


def test_one_node_two_gpus_is_ten_items():
    items = frame_to_scene(frame_of(node_with_gpus("node-a", 2)))
    assert len(items) == 10
    ids = {item.item_id for item in items}
    assert ids == {
        "node/node-a/base",
        "node/node-a/outline",
        "node/node-a/gpu0/util",
        "node/node-a/gpu0/mem",
        "node/node-a/gpu0/power",
        "node/node-a/gpu0/outline",
        "node/node-a/gpu1/util",
        "node/node-a/gpu1/mem",
        "node/node-a/gpu1/power",
        "node/node-a/gpu1/outline",
    }


def test_empty_frame_empty_scene():
    assert frame_to_scene(frame_of()) == []


def test_reference_fleet_item_count():
    config = SimulatorConfig(node_count=318, gpus_per_node=2, seed=1)
    items = frame_to_scene(simulate_tick(config, 0))
    assert len(items) == expected_item_count(318, 2)
    assert len(items) == 3180


def test_cpu_node_is_two_items():
    items = frame_to_scene(frame_of(node_with_gpus("node-c", 0)))
    assert [item.item_id for item in items] == ["node/node-c/base", "node/node-c/outline"]
    assert items[0].mesh_id == "node-case-cpu"
    assert items[0].template_id == "node-base/cpu"


def test_instance_props_follow_telemetry():
    node = node_with_gpus("node-a", 1, gpu_temp=90.0, node_temp=80.0, alerts=("gpu-temp-high",))
    by_id = {item.item_id: item for item in frame_to_scene(frame_of(node))}

    base = by_id["node/node-a/base"].instance
    assert base.load == 0.4
    assert base.alert_flag == 1
    assert base.idle_flag == 0 and base.off_flag == 0

    util = by_id["node/node-a/gpu0/util"].instance
    assert util.load == 0.5
    mem = by_id["node/node-a/gpu0/mem"].instance
    assert mem.load == 0.25  # 2^29 of 2^31 bytes
    power = by_id["node/node-a/gpu0/power"].instance
    assert power.load == 0.5  # 200 W of the 0..400 W default calibration

    # 90 C surpasses the 85 C GPU tolerance; 80 C surpasses the 75 C node tolerance
    assert by_id["node/node-a/gpu0/outline"].instance.outline_enabled == 1
    assert by_id["node/node-a/outline"].instance.outline_enabled == 1


def test_boundary_temperatures_do_not_outline():
    policy = EncodingPolicy()
    node = node_with_gpus(
        "node-a", 1, gpu_temp=policy.gpu_temp_tolerance_c, node_temp=policy.node_temp_tolerance_c
    )
    by_id = {item.item_id: item for item in frame_to_scene(frame_of(node))}
    assert by_id["node/node-a/gpu0/outline"].instance.outline_enabled == 0
    assert by_id["node/node-a/outline"].instance.outline_enabled == 0


def test_off_and_idle_flags():
    off = node_with_gpus("node-off", 1, state=NodeState.OFF)
    idle = node_with_gpus("node-idle", 1, state=NodeState.IDLE)
    by_id = {item.item_id: item for item in frame_to_scene(frame_of(off, idle))}
    assert by_id["node/node-off/base"].instance.off_flag == 1
    assert by_id["node/node-off/base"].instance.load == 0.0
    assert by_id["node/node-idle/base"].instance.idle_flag == 1
    assert by_id["node/node-off/gpu0/util"].instance.off_flag == 1


def test_items_ordered_and_ids_unique():
    config = SimulatorConfig(node_count=12, gpus_per_node=2, cpu_node_count=4, seed=2)
    items = frame_to_scene(simulate_tick(config, 3))
    ids = [item.item_id for item in items]
    assert len(ids) == len(set(ids))
    node_sequence = [i.split("/")[1] for i in ids]
    assert node_sequence == sorted(node_sequence)


def test_explicit_layout_rejects_unplaced_node():
    layout = LayoutConfig(node_order=("node-a",))
    frame = frame_of(node_with_gpus("node-a", 1), node_with_gpus("node-b", 1))
    with pytest.raises(LayoutError) as exc:
        frame_to_scene(frame, layout=layout)
    assert "node-b" in str(exc.value)


def test_explicit_layout_pins_slots():
    layout = LayoutConfig(node_order=("node-b", "node-a"))
    frame_both = frame_of(node_with_gpus("node-a", 0), node_with_gpus("node-b", 0))
    frame_one = frame_of(node_with_gpus("node-a", 0))
    both = {i.item_id: i for i in frame_to_scene(frame_both, layout=layout)}
    one = {i.item_id: i for i in frame_to_scene(frame_one, layout=layout)}
    # node-a keeps its pinned slot even when node-b is absent
    assert one["node/node-a/base"].transform == both["node/node-a/base"].transform


def test_missing_template_rejected():
    registry = {k: v for k, v in default_registry().items() if k != "outline/red"}
    with pytest.raises(SceneError) as exc:
        frame_to_scene(frame_of(node_with_gpus("node-a", 1)), templates=registry)
    assert "outline/red" in str(exc.value)


def test_transforms_distinct_per_node():
    config = SimulatorConfig(node_count=50, gpus_per_node=0, cpu_node_count=0, seed=3)
    frame = simulate_tick(config, 0)
    items = frame_to_scene(frame)
    positions = {(i.transform.x, i.transform.y, i.transform.z) for i in items if i.item_id.endswith("/base")}
    assert len(positions) == 50


@settings(max_examples=30, deadline=None)
@given(
    gpu_nodes=st.integers(min_value=0, max_value=12),
    gpus=st.integers(min_value=0, max_value=4),
    cpu_nodes=st.integers(min_value=0, max_value=12),
)
def test_property_scene_size_formula(gpu_nodes, gpus, cpu_nodes):
    if gpu_nodes + cpu_nodes == 0 or (gpu_nodes > 0 and gpus == 0):
        return
    config = SimulatorConfig(
        node_count=max(gpu_nodes, 1) if gpu_nodes else 1,
        gpus_per_node=gpus if gpu_nodes else 0,
        cpu_node_count=cpu_nodes,
        seed=9,
    )
    frame = simulate_tick(config, 0)
    items = frame_to_scene(frame)
    gpu_n = sum(1 for n in frame.nodes.values() if n.gpus)
    cpu_n = len(frame.nodes) - gpu_n
    per_gpu_node = 1 + 3 * gpus + gpus + 1
    assert len(items) == gpu_n * per_gpu_node + cpu_n * 2
