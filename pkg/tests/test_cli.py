"""Command-line behavior: flags, exit codes, stream discipline."""

import json
import subprocess
import sys

import pytest

from racktwin.cli import main
from racktwin.ingest import SimulatorConfig, serialize_snapshot, simulate_tick


def run(args):
    return main(list(args))


def write_snapshot(path, node_count=3, seed=9, tick=0, gpus=1):
    cfg = SimulatorConfig(node_count=node_count, gpus_per_node=gpus, seed=seed)
    frame = simulate_tick(cfg, tick)
    path.write_text(serialize_snapshot(frame), encoding="utf-8")
    return frame


def test_stats_prints_the_comparison_table(capsys):
    assert run(["stats"]) == 0
    out = capsys.readouterr().out
    assert "BATCH AND TRIANGLE COUNTS PER FRAME" in out
    assert "naive" in out and "instanced" in out and "multiplier" in out
    for row in ("Batches", "Triangles", "Potential draw calls"):
        assert row in out
    assert "Instanced submissions" in out


def test_stats_scene_flag_changes_the_numbers(tmp_path, capsys):
    scene = tmp_path / "tiny.json"
    scene.write_text(json.dumps({"fleet": {"gpu_nodes": 2, "gpus_per_node": 1}}))
    assert run(["stats", "--scene", str(scene)]) == 0
    out = capsys.readouterr().out
    # 2 nodes x (base + outline + 1 gpu x (3 bars + outline)) = 12 items.
    assert f"{'Potential draw calls':<22}{12:>12}" in out


def test_stats_json_rows_parse(capsys):
    assert run(["stats", "--json"]) == 0
    rows = [json.loads(line) for line in capsys.readouterr().out.splitlines() if line]
    metrics = [r["metric"] for r in rows]
    assert metrics == ["batches", "triangles", "potential_draw_calls", "draw_submissions"]
    assert all({"naive", "instanced", "multiplier"} <= set(r) for r in rows)


def test_stats_missing_scene_is_an_error(tmp_path, capsys):
    assert run(["stats", "--scene", str(tmp_path / "nope.json")]) == 1
    assert "nope.json" in capsys.readouterr().err


def test_simulate_is_deterministic_and_lists_files(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(["simulate", "--nodes", "4", "--gpus", "2", "--ticks", "3",
                "--seed", "7", "--out", str(a)]) == 0
    out_a = capsys.readouterr().out
    assert run(["simulate", "--nodes", "4", "--gpus", "2", "--ticks", "3",
                "--seed", "7", "--out", str(b)]) == 0
    assert len(out_a.splitlines()) == 3
    for name in ("snap-000000.tsv", "snap-000001.tsv", "snap-000002.tsv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
        assert name in out_a


def test_simulate_rejects_bad_fleet(capsys):
    assert run(["simulate", "--nodes", "0"]) == 1
    assert "node_count" in capsys.readouterr().err


def test_ingest_missing_file_names_the_path(capsys):
    assert run(["ingest", "does-not-exist.tsv"]) == 1
    assert "does-not-exist.tsv" in capsys.readouterr().err


def test_ingest_prints_alert_summary(tmp_path, capsys):
    rules = tmp_path / "rules.tsv"
    rules.write_text("hot-gpu\tgpu*.temp_c\tgt\t-1\tcritical\n")
    snap = tmp_path / "snap.tsv"
    frame = write_snapshot(snap)
    assert run(["ingest", str(snap), "--rules", str(rules)]) == 0
    out = capsys.readouterr().out
    assert f"nodes\t{len(frame.nodes)}" in out
    assert "alerts\t" in out
    assert "hot-gpu" in out


def test_ingest_row_errors_reported_and_nonzero(tmp_path, capsys):
    snap = tmp_path / "snap.tsv"
    write_snapshot(snap)
    lines = snap.read_text().splitlines()
    cells = lines[1].split("\t")
    cells[3] = "soup"
    lines[1] = "\t".join(cells)
    snap.write_text("\n".join(lines) + "\n")
    assert run(["ingest", str(snap)]) == 1
    captured = capsys.readouterr()
    assert ":2:" in captured.err
    assert "nodes\t2" in captured.out


def test_ingest_schema_flag_enforces_header(tmp_path, capsys):
    snap = tmp_path / "snap.tsv"
    write_snapshot(snap)
    schema = tmp_path / "schema.tsv"
    schema.write_text("node\tstate\tcpu_load\tnode_temp_c\n")
    assert run(["ingest", str(snap), "--schema", str(schema)]) == 1
    assert "header row does not match" in capsys.readouterr().err


def test_ingest_then_replay_round_trip(tmp_path, capsys):
    hist = tmp_path / "hist"
    for tick in range(2):
        snap = tmp_path / f"s{tick}.tsv"
        write_snapshot(snap, tick=tick)
        assert run(["ingest", str(snap), "--history", str(hist)]) == 0
    capsys.readouterr()

    session = sorted(hist.glob("history-*"))[0]
    assert run(["replay", "--history", str(session)]) == 0
    lines = capsys.readouterr().out.splitlines()
    packets = [json.loads(line) for line in lines]
    assert [p["kind"] for p in packets] == ["full", "delta"]
    assert [p["timestamp"] for p in packets] == [0, 1000]


def test_replay_range_flags_filter(tmp_path, capsys):
    hist = tmp_path / "hist"
    for tick in range(3):
        snap = tmp_path / f"s{tick}.tsv"
        write_snapshot(snap, tick=tick)
        run(["ingest", str(snap), "--history", str(hist)])
    capsys.readouterr()
    session = sorted(hist.glob("history-*"))[0]

    assert run(["replay", "--history", str(session), "--from", "1000", "--to", "2000"]) == 0
    packets = [json.loads(l) for l in capsys.readouterr().out.splitlines()]
    assert [p["timestamp"] for p in packets] == [1000, 2000]
    assert packets[0]["kind"] == "full"

    assert run(["replay", "--history", str(session), "--from", "9000", "--to", "9999"]) == 0
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "no frames" in captured.err

    assert run(["replay", "--history", str(session), "--from", "2000", "--to", "1000"]) == 1


def test_replay_missing_session_is_an_error(tmp_path, capsys):
    assert run(["replay", "--history", str(tmp_path / "void")]) == 1
    assert "void" in capsys.readouterr().err


def test_config_file_supplies_defaults(tmp_path, capsys):
    out_dir = tmp_path / "fromconfig"
    cfg = tmp_path / "cli.json"
    cfg.write_text(json.dumps({"nodes": 2, "gpus": 1, "ticks": 2, "out": str(out_dir)}))
    assert run(["simulate", "--config", str(cfg)]) == 0
    capsys.readouterr()
    assert len(list(out_dir.glob("snap-*.tsv"))) == 2

    # An explicit flag beats the config value.
    other = tmp_path / "explicit"
    assert run(["simulate", "--config", str(cfg), "--out", str(other), "--ticks", "1"]) == 0
    capsys.readouterr()
    assert len(list(other.glob("snap-*.tsv"))) == 1


def test_config_unknown_key_is_rejected(tmp_path, capsys):
    cfg = tmp_path / "cli.json"
    cfg.write_text(json.dumps({"nodez": 2}))
    assert run(["simulate", "--config", str(cfg)]) == 1
    assert "nodez" in capsys.readouterr().err


def test_unknown_subcommand_exits_nonzero(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["bogus"])
    assert exc.value.code != 0


def test_module_entrypoint_runs_in_subprocess(tmp_path):
    cmd = [
        sys.executable, "-m", "racktwin", "simulate",
        "--nodes", "3", "--gpus", "1", "--ticks", "1", "--seed", "5",
        "--out", str(tmp_path / "out"),
    ]
    first = subprocess.run(cmd, capture_output=True, text=True)
    assert first.returncode == 0, first.stderr
    assert "snap-000000.tsv" in first.stdout
    data1 = (tmp_path / "out" / "snap-000000.tsv").read_bytes()
    second = subprocess.run(cmd, capture_output=True, text=True)
    assert second.returncode == 0
    assert (tmp_path / "out" / "snap-000000.tsv").read_bytes() == data1
