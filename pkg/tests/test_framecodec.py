"""Tests for the frame <-> triple store codec."""

import pytest

from racktwin.framecodec import frame_from_triples, frame_to_triples
from racktwin.ingest import SimulatorConfig, simulate_tick
from racktwin.model import (
    GpuTelemetry,
    ModelError,
    NodeKind,
    NodeState,
    NodeTelemetry,
    SnapshotFrame,
)


def small_frame():
    node = NodeTelemetry(
        node_name="node-0001",
        kind=NodeKind.GPU_ACCELERATED,
        state=NodeState.ACTIVE,
        cpu_load=0.42,
        node_temp_c=55.5,
        alerts=("gpu-temp-high",),
        user="alice",
        job_id="job-000123",
        gpus=(
            GpuTelemetry(0, 0.9, 2**30, 2**31, 250.0, 88.0),
            GpuTelemetry(1, 0.1, 2**20, 2**31, 70.0, 40.0),
        ),
    )
    return SnapshotFrame(timestamp=1234, nodes={"node-0001": node}, env=())


def test_round_trip_small_frame():
    frame = small_frame()
    assert frame_from_triples(frame_to_triples(frame)) == frame


def test_round_trip_simulated_frame():
    config = SimulatorConfig(node_count=12, gpus_per_node=2, cpu_node_count=5, seed=3)
    frame = simulate_tick(config, 17)
    assert frame_from_triples(frame_to_triples(frame)) == frame


def test_triple_convention_row_node_col_metric():
    store = frame_to_triples(small_frame())
    assert store.get("node-0001", "cpu_load") == 0.42
    assert store.get("node-0001", "gpu0.temp_c") == 88.0
    assert store.get("node-0001", "gpu1.power_draw_w") == 70.0
    assert store.get("frame", "timestamp") == 1234


def test_queryable_by_metric_glob():
    store = frame_to_triples(small_frame())
    temps = store.query("node-*", "gpu?.temp_c")
    assert [(r, c, v) for r, c, v in temps.triples()] == [
        ("node-0001", "gpu0.temp_c", 88.0),
        ("node-0001", "gpu1.temp_c", 40.0),
    ]


def test_env_records_use_prefixed_rows():
    config = SimulatorConfig(node_count=2, gpus_per_node=1, env_sensor_count=2, seed=9)
    frame = simulate_tick(config, 0)
    store = frame_to_triples(frame)
    env_rows = [r for r in store.rows() if r.startswith("env/")]
    assert env_rows == ["env/ecopod-00", "env/ecopod-01"]
    assert frame_from_triples(store).env == frame.env


def test_reserved_row_collision_rejected():
    node = NodeTelemetry(
        node_name="frame",
        kind=NodeKind.CPU_ONLY,
        state=NodeState.IDLE,
        cpu_load=0.0,
        node_temp_c=30.0,
    )
    frame = SnapshotFrame(timestamp=0, nodes={"frame": node}, env=())
    with pytest.raises(ModelError):
        frame_to_triples(frame)


def test_missing_timestamp_rejected():
    store = frame_to_triples(small_frame())
    bad = store.query("node-*", "*")  # drops the frame row
    with pytest.raises(ModelError):
        frame_from_triples(bad)
