"""Tests for domain type invariants."""

import pytest

from racktwin.model import (
    GpuTelemetry,
    ModelError,
    NodeKind,
    NodeState,
    NodeTelemetry,
    SnapshotFrame,
)


def good_gpu(**overrides):
    base = dict(
        gpu_index=0,
        utilization=0.5,
        mem_used_bytes=100,
        mem_capacity_bytes=200,
        power_draw_w=150.0,
        temp_c=60.0,
    )
    base.update(overrides)
    return GpuTelemetry(**base)


def good_node(**overrides):
    base = dict(
        node_name="node-0001",
        kind=NodeKind.GPU_ACCELERATED,
        state=NodeState.ACTIVE,
        cpu_load=0.5,
        node_temp_c=50.0,
        gpus=(good_gpu(),),
    )
    base.update(overrides)
    return NodeTelemetry(**base)


def test_valid_node_passes():
    good_node().validate()


def test_cpu_load_range_enforced():
    with pytest.raises(ModelError):
        good_node(cpu_load=1.2).validate()
    with pytest.raises(ModelError):
        good_node(cpu_load=-0.1).validate()


def test_gpus_empty_iff_cpu_only():
    with pytest.raises(ModelError):
        good_node(kind=NodeKind.CPU_ONLY).validate()
    with pytest.raises(ModelError):
        good_node(kind=NodeKind.GPU_ACCELERATED, gpus=()).validate()
    good_node(kind=NodeKind.CPU_ONLY, gpus=()).validate()


def test_off_state_forbids_live_readings():
    with pytest.raises(ModelError):
        good_node(state=NodeState.OFF, cpu_load=0.3).validate()
    with pytest.raises(ModelError):
        good_node(state=NodeState.OFF, cpu_load=0.0).validate()  # gpu still live
    good_node(
        state=NodeState.OFF,
        cpu_load=0.0,
        gpus=(good_gpu(utilization=0.0, power_draw_w=0.0, mem_used_bytes=0),),
    ).validate()


def test_gpu_memory_bounds():
    with pytest.raises(ModelError):
        good_gpu(mem_used_bytes=300).validate()
    with pytest.raises(ModelError):
        good_gpu(mem_used_bytes=-1).validate()
    with pytest.raises(ModelError):
        good_gpu(utilization=1.5).validate()
    with pytest.raises(ModelError):
        good_gpu(power_draw_w=-2.0).validate()


def test_frame_key_must_match_node_name():
    frame = SnapshotFrame(timestamp=0, nodes={"wrong-key": good_node()})
    with pytest.raises(ModelError):
        frame.validate()


def test_frame_iteration_sorted():
    nodes = {
        "node-b": good_node(node_name="node-b"),
        "node-a": good_node(node_name="node-a"),
    }
    frame = SnapshotFrame(timestamp=0, nodes=nodes)
    assert frame.node_names() == ["node-a", "node-b"]
    assert [n.node_name for n in frame.iter_nodes()] == ["node-a", "node-b"]


def test_telemetry_is_immutable():
    node = good_node()
    with pytest.raises(AttributeError):
        node.cpu_load = 0.9
    renamed = node.with_alerts(("x",))
    assert node.alerts == ()
    assert renamed.alerts == ("x",)
