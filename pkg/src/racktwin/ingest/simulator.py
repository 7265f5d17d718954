"""Deterministic synthetic telemetry stream for desk-scale testing.

Stands in for the real collector stack. Every frame is a pure function of
(seed, tick): slow per-node drift comes from segment-interpolated hash
noise (BLAKE2-based value noise, reproducible across processes), per-tick
jitter from a counter-based Philox generator keyed by the seed with the
tick as counter, so frame t is reconstructible in O(nodes) without
replaying ticks 0..t-1.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from ..model import EnvTelemetry, GpuTelemetry, NodeKind, NodeState, NodeTelemetry, SnapshotFrame

DEFAULT_USERS = ("alice", "bob", "carol", "dave", "erin", "frank")


@dataclass(frozen=True)
class DriftModel:
    """Per-metric random-walk step sizes (jitter amplitudes per tick)."""

    segment_ticks: int = 60          # length of one smooth drift segment
    state_segment_ticks: int = 240   # how long a node keeps its state/user
    cpu_load_step: float = 0.03
    node_temp_step_c: float = 0.8
    gpu_util_step: float = 0.04
    gpu_mem_step_frac: float = 0.015
    gpu_power_step_w: float = 9.0
    gpu_temp_step_c: float = 1.2
    env_step: float = 0.6


@dataclass(frozen=True)
class SimulatorConfig:
    node_count: int = 318            # GPU-accelerated nodes
    gpus_per_node: int = 2
    cpu_node_count: int = 0          # additional CPU-only nodes
    tick_hz: float = 1.0
    seed: int = 1
    drift: DriftModel = field(default_factory=DriftModel)
    idle_fraction: float = 0.12
    off_fraction: float = 0.03
    hot_gpu_fraction: float = 0.05
    gpu_mem_capacity_bytes: int = 94 * 2**30
    gpu_idle_power_w: float = 68.0
    gpu_max_power_w: float = 380.0
    users: tuple[str, ...] = DEFAULT_USERS
    env_sensor_count: int = 2
    base_timestamp_ms: int = 0

    def validate(self) -> None:
        if self.node_count < 1:
            raise ValueError("node_count must be >= 1")
        if self.gpus_per_node < 0:
            raise ValueError("gpus_per_node must be >= 0")
        if self.cpu_node_count < 0:
            raise ValueError("cpu_node_count must be >= 0")
        if self.tick_hz <= 0:
            raise ValueError("tick_hz must be > 0")
        if self.off_fraction < 0 or self.idle_fraction < 0:
            raise ValueError("idle/off fractions must be >= 0")
        if self.off_fraction + self.idle_fraction > 1:
            raise ValueError("idle_fraction + off_fraction must be <= 1")

    @property
    def interval_ms(self) -> int:
        return max(1, round(1000.0 / self.tick_hz))

    @property
    def total_nodes(self) -> int:
        return self.node_count + self.cpu_node_count

    def node_name(self, index: int) -> str:
        return f"node-{index:04d}"

    def timestamp_for_tick(self, t: int) -> int:
        return self.base_timestamp_ms + t * self.interval_ms


def _hash01(seed: int, *parts) -> float:
    key = (str(seed) + ":" + ":".join(str(p) for p in parts)).encode()
    digest = hashlib.blake2b(key, digest_size=8).digest()
    return int.from_bytes(digest, "big") / 2.0**64


def _smooth(seed: int, tag: str, name: str, t: int, segment_ticks: int) -> float:
    """Value noise in [0,1): hash values at segment knots, smoothstepped."""
    seg, rem = divmod(t, segment_ticks)
    u0 = _hash01(seed, name, tag, seg)
    u1 = _hash01(seed, name, tag, seg + 1)
    f = rem / segment_ticks
    w = f * f * (3.0 - 2.0 * f)
    return u0 * (1.0 - w) + u1 * w


def _clamp01(x: float) -> float:
    return 0.0 if x < 0.0 else (1.0 if x > 1.0 else x)


def _tick_jitter(config: SimulatorConfig, t: int, rows: int, cols: int) -> list[list[float]]:
    # Counter-mode generator: tick t addresses its own stream block, so any
    # frame is reconstructible without replaying earlier ticks.  tolist()
    # hands back plain Python floats; telemetry never carries numpy scalars.
    bitgen = np.random.Philox(key=config.seed & (2**64 - 1), counter=[0, 0, 0, t])
    return np.random.Generator(bitgen).uniform(-1.0, 1.0, size=(rows, cols)).tolist()


def simulate_tick(config: SimulatorConfig, t: int) -> SnapshotFrame:
    """Generate the frame for tick t. Pure in (config.seed, t)."""
    if t < 0:
        raise ValueError("tick index must be >= 0")
    config.validate()
    drift = config.drift
    g = config.gpus_per_node
    n = config.total_nodes
    seed = config.seed
    timestamp = config.timestamp_for_tick(t)

    # column map per node: 0 cpu, 1 node temp, then 4 per gpu (util, mem, power, temp)
    eps = _tick_jitter(config, t, n, 2 + 4 * g)
    env_eps = _tick_jitter(config, t ^ 0x5EED, max(1, config.env_sensor_count), 3)

    state_seg = t // drift.state_segment_ticks
    nodes: dict[str, NodeTelemetry] = {}
    for i in range(n):
        name = config.node_name(i)
        is_gpu_node = i < config.node_count and g > 0

        su = _hash01(seed, name, "state", state_seg)
        if su < config.off_fraction:
            state = NodeState.OFF
        elif su < config.off_fraction + config.idle_fraction:
            state = NodeState.IDLE
        else:
            state = NodeState.ACTIVE

        activity = _smooth(seed, "act", name, t, drift.segment_ticks)

        if state is NodeState.ACTIVE:
            cpu_load = round(_clamp01(0.08 + 0.88 * activity + drift.cpu_load_step * eps[i][0]), 4)
            node_temp = round(36.0 + 32.0 * cpu_load + drift.node_temp_step_c * eps[i][1], 1)
            user = config.users[int(_hash01(seed, name, "user", state_seg) * len(config.users)) % len(config.users)]
            job_id = f"job-{int(_hash01(seed, name, 'job', state_seg) * 1_000_000):06d}"
        elif state is NodeState.IDLE:
            cpu_load = round(0.01 + 0.02 * (eps[i][0] + 1.0), 4)
            node_temp = round(30.0 + drift.node_temp_step_c * eps[i][1], 1)
            user = None
            job_id = None
        else:
            cpu_load = 0.0
            node_temp = round(21.0 + 0.5 * eps[i][1], 1)
            user = None
            job_id = None

        gpus: list[GpuTelemetry] = []
        if is_gpu_node:
            for j in range(g):
                base = 2 + 4 * j
                bias = _hash01(seed, name, f"gpu{j}", "bias")
                hot = _hash01(seed, name, f"gpu{j}", "hot") < config.hot_gpu_fraction
                cap = config.gpu_mem_capacity_bytes
                if state is NodeState.ACTIVE:
                    util = round(
                        _clamp01(activity * (0.72 + 0.5 * bias) + drift.gpu_util_step * eps[i][base]),
                        4,
                    )
                    mem_frac = _clamp01(
                        0.10 + 0.85 * _clamp01(activity * (0.8 + 0.4 * bias))
                        + drift.gpu_mem_step_frac * eps[i][base + 1]
                    )
                    power = round(
                        max(
                            0.0,
                            config.gpu_idle_power_w
                            + (config.gpu_max_power_w - config.gpu_idle_power_w) * util**1.15
                            + drift.gpu_power_step_w * eps[i][base + 2],
                        )
                        + 0.0,
                        1,
                    )
                    temp = round(
                        29.0 + 46.0 * util + (12.0 if hot else 0.0) + drift.gpu_temp_step_c * eps[i][base + 3],
                        1,
                    )
                elif state is NodeState.IDLE:
                    util = 0.0
                    mem_frac = 0.02
                    power = round(max(0.0, config.gpu_idle_power_w + 2.0 * eps[i][base + 2]) + 0.0, 1)
                    temp = round(28.0 + 1.0 * eps[i][base + 3], 1)
                else:
                    util = 0.0
                    mem_frac = 0.0
                    power = 0.0
                    temp = round(22.0 + 0.3 * eps[i][base + 3], 1)
                gpus.append(
                    GpuTelemetry(
                        gpu_index=j,
                        utilization=util,
                        mem_used_bytes=int(mem_frac * cap),
                        mem_capacity_bytes=cap,
                        power_draw_w=power,
                        temp_c=temp,
                    )
                )

        nodes[name] = NodeTelemetry(
            node_name=name,
            kind=NodeKind.GPU_ACCELERATED if is_gpu_node else NodeKind.CPU_ONLY,
            state=state,
            cpu_load=cpu_load,
            node_temp_c=node_temp,
            alerts=(),
            user=user,
            job_id=job_id,
            gpus=tuple(gpus),
        )

    env = []
    for k in range(config.env_sensor_count):
        sid = f"ecopod-{k:02d}"
        h = _smooth(seed, f"env{k}:hum", "env", t, drift.segment_ticks)
        a = _smooth(seed, f"env{k}:air", "env", t, drift.segment_ticks)
        c = _smooth(seed, f"env{k}:tmp", "env", t, drift.segment_ticks)
        env.append(
            EnvTelemetry(
                sensor_id=sid,
                humidity_pct=round(min(100.0, max(0.0, 47.0 + 24.0 * (h - 0.5) + drift.env_step * env_eps[k][0])), 1),
                airflow=round(118.0 + 60.0 * (a - 0.5) + 2.0 * drift.env_step * env_eps[k][1], 1),
                temp_c=round(19.5 + 6.0 * (c - 0.5) + 0.5 * drift.env_step * env_eps[k][2], 1),
                timestamp=timestamp,
            )
        )

    frame = SnapshotFrame(timestamp=timestamp, nodes=nodes, env=tuple(env))
    frame.validate()
    return frame


def frame_stream(config: SimulatorConfig, start_tick: int = 0):
    """Endless (tick, frame) generator from start_tick upward."""
    t = start_tick
    while True:
        yield t, simulate_tick(config, t)
        t += 1
