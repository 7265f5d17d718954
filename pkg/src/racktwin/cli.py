"""Operator command line.

Subcommands: serve (run the streaming service), ingest (parse a snapshot
file into history and summarize alerts), simulate (write synthetic
snapshot files), replay (stream packets from a saved history session),
stats (print the naive-vs-instanced batching report for a scene).

Diagnostics go to stderr, data to stdout; exit status is 0 only when no
errors occurred.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .batching import naive_stats, plan_batches, scene_stats, stats_json_lines, stats_report
from .history import HistoryError, HistoryStore
from .ingest import (
    DEFAULT_ALERT_RULES,
    SimulatorConfig,
    condition,
    load_rules_file,
    parse_snapshot,
    serialize_snapshot,
    simulate_tick,
)
from .ingest.alerts import AlertConfigError
from .ingest.schema import SchemaError, schema_from_file
from .scene import frame_to_scene
from .sceneconfig import SceneConfigError, SceneSpec, default_scene_spec, load_scene_config
from .service import ServiceConfigError, TwinPipeline, encode_packet, resolve_bind
from .service.pipeline import replay_packets

# keys a --config file may set; everything else is a typo we refuse
CONFIG_KEYS = frozenset(
    {
        "scene", "rules", "schema", "host", "port", "interval", "ticks",
        "watch", "out", "history", "nodes", "gpus", "cpu_nodes", "hz",
        "seed", "tick", "json",
    }
)

_ERRORS = (
    AlertConfigError,
    HistoryError,
    SceneConfigError,
    SchemaError,
    ServiceConfigError,
    OSError,
)


class CliError(Exception):
    """Operator-facing failure; message printed to stderr, exit 1."""


def _load_spec(scene: Optional[str]) -> SceneSpec:
    return load_scene_config(scene) if scene else default_scene_spec()


def _load_rules(path: Optional[str]):
    return load_rules_file(path) if path else list(DEFAULT_ALERT_RULES)


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app, simulator_source, watch_directory

    spec = _load_spec(args.scene)
    rules = _load_rules(args.rules)
    host, port = resolve_bind(args.host, args.port)
    if args.watch:
        source = watch_directory(args.watch)
    else:
        source = simulator_source(spec.simulator)
    pipeline = TwinPipeline(spec=spec, rules=rules)
    app = create_app(pipeline, source=source, interval_s=args.interval, tick_limit=args.ticks)
    print(f"listening on {host}:{port}", file=sys.stderr)
    uvicorn.run(app, host=host, port=port, log_level="warning")
    return 0


def cmd_ingest(args: argparse.Namespace) -> int:
    path = Path(args.file)
    if not path.exists():
        raise CliError(f"snapshot file not found: {path}")
    schema = schema_from_file(args.schema) if args.schema else None
    result = parse_snapshot(path.read_text(encoding="utf-8"), schema)
    for err in result.errors:
        print(f"{path}:{err.line}: {err.message}", file=sys.stderr)
    if result.clamp_count:
        print(f"{path}: clamped {result.clamp_count} out-of-range values", file=sys.stderr)
    if not result.frame.nodes:
        raise CliError(f"{path}: no usable rows")

    conditioned = condition(result.frame, _load_rules(args.rules))
    print(f"nodes\t{len(conditioned.frame.nodes)}")
    print(f"alerts\t{len(conditioned.alerts)}")
    for alert in conditioned.alerts:
        print(f"{alert.node}\t{alert.rule_id}\t{alert.value}\t{alert.severity}")

    if args.history:
        root = Path(args.history)
        sessions = sorted(root.glob("history-*")) if root.is_dir() else []
        if sessions:
            store = HistoryStore.load(sessions[-1])
        else:
            store = HistoryStore()
        store.append(conditioned.frame)
        session = store.save(root)
        print(f"history: {session} now holds {len(store)} frames", file=sys.stderr)

    return 1 if result.errors else 0


def cmd_simulate(args: argparse.Namespace) -> int:
    config = SimulatorConfig(
        node_count=args.nodes,
        gpus_per_node=args.gpus,
        cpu_node_count=args.cpu_nodes,
        tick_hz=args.hz,
        seed=args.seed,
    )
    try:
        config.validate()
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for t in range(args.ticks):
        frame = simulate_tick(config, t)
        target = out / f"snap-{t:06d}.tsv"
        target.write_text(serialize_snapshot(frame), encoding="utf-8")
        print(target)
    return 0


def cmd_replay(args: argparse.Namespace) -> int:
    session = Path(args.history)
    store = HistoryStore.load(session)
    timestamps = store.timestamps()
    t0 = args.t0 if args.t0 is not None else timestamps[0]
    t1 = args.t1 if args.t1 is not None else timestamps[-1]
    if t0 > t1:
        raise CliError(f"--from {t0} is after --to {t1}")
    frames = store.range(t0, t1)
    if not frames:
        print(f"no frames in [{t0}, {t1}]", file=sys.stderr)
        return 0
    spec = _load_spec(args.scene)
    for packet in replay_packets(frames, spec):
        print(encode_packet(packet))
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    spec = _load_spec(args.scene)
    frame = simulate_tick(spec.simulator, args.tick)
    items = frame_to_scene(
        frame, layout=spec.layout, templates=spec.templates, policy=spec.policy
    )
    naive = naive_stats(items)
    instanced = scene_stats(plan_batches(items))
    if args.json:
        print(stats_json_lines(naive, instanced))
    else:
        print(stats_report(naive, instanced))
    return 0


def _read_config_file(argv: Sequence[str]) -> dict:
    """Pre-scan for --config and load its flag defaults.

    Explicit flags still win; unknown keys are rejected rather than
    silently ignored. The values become subparser defaults, which is why
    this runs before the parser is built.
    """
    path = None
    for i, arg in enumerate(argv):
        if arg == "--config":
            if i + 1 >= len(argv):
                return {}  # argparse will report the missing value
            path = argv[i + 1]
        elif arg.startswith("--config="):
            path = arg.split("=", 1)[1]
    if path is None:
        return {}
    p = Path(path)
    if not p.exists():
        raise CliError(f"config file not found: {p}")
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CliError(f"{p}: invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise CliError(f"{p}: config must be a JSON object")
    for key in data:
        if key not in CONFIG_KEYS:
            known = ", ".join(sorted(CONFIG_KEYS))
            raise CliError(f"{p}: unknown config key {key!r} (known: {known})")
    return data


def build_parser(config_defaults: Optional[dict] = None) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="FILE", help="JSON file supplying flag defaults")

    parser = argparse.ArgumentParser(prog="racktwin", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    subparsers = []

    p = sub.add_parser("serve", parents=[common], help="run the streaming service")
    p.add_argument("--scene", metavar="FILE", help="scene config (default: built-in)")
    p.add_argument("--rules", metavar="FILE", help="alert rules file (default: built-in)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8787)
    p.add_argument("--interval", type=float, default=None, help="seconds between ticks")
    p.add_argument("--ticks", type=int, default=None, help="stop after N ticks")
    p.add_argument("--watch", metavar="DIR", help="ingest snapshot files from DIR instead of simulating")
    p.set_defaults(func=cmd_serve)
    subparsers.append(p)

    p = sub.add_parser("ingest", parents=[common], help="parse a snapshot file, report alerts")
    p.add_argument("file", help="snapshot file (.tsv or .csv)")
    p.add_argument("--schema", metavar="FILE", help="snapshot schema (header row) the file must match")
    p.add_argument("--rules", metavar="FILE", help="alert rules file (default: built-in)")
    p.add_argument("--history", metavar="DIR", help="append the frame to a history session under DIR")
    p.set_defaults(func=cmd_ingest)
    subparsers.append(p)

    p = sub.add_parser("simulate", parents=[common], help="write synthetic snapshot files")
    p.add_argument("--nodes", type=int, default=318, help="GPU-accelerated node count")
    p.add_argument("--gpus", type=int, default=2, help="GPUs per accelerated node")
    p.add_argument("--cpu-nodes", dest="cpu_nodes", type=int, default=0)
    p.add_argument("--hz", type=float, default=1.0, help="tick rate")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--ticks", type=int, default=1, help="number of snapshot files")
    p.add_argument("--out", default="snapshots", help="output directory")
    p.set_defaults(func=cmd_simulate)
    subparsers.append(p)

    p = sub.add_parser("replay", parents=[common], help="stream packets from a saved history session")
    p.add_argument("--history", required=True, metavar="DIR", help="history session directory")
    p.add_argument("--from", dest="t0", type=int, default=None, metavar="T0")
    p.add_argument("--to", dest="t1", type=int, default=None, metavar="T1")
    p.add_argument("--scene", metavar="FILE", help="scene config (default: built-in)")
    p.set_defaults(func=cmd_replay)
    subparsers.append(p)

    p = sub.add_parser("stats", parents=[common], help="print the batching report for a scene")
    p.add_argument("--scene", metavar="FILE", help="scene config (default: built-in)")
    p.add_argument("--tick", type=int, default=0, help="which synthetic tick to measure")
    p.add_argument("--json", action="store_true", help="machine-readable rows instead of the table")
    p.set_defaults(func=cmd_stats)
    subparsers.append(p)

    # Subparsers parse into a fresh namespace, so config-supplied defaults
    # must land on each subparser after its arguments exist; explicit
    # flags still override them.
    if config_defaults:
        for sp in subparsers:
            sp.set_defaults(**config_defaults)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        parser = build_parser(_read_config_file(argv))
        args = parser.parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except _ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
