from __future__ import annotations

from pathlib import Path

from bitplan.cli import cli_main


def test_plan_writes_csv_and_svgs(tmp_path):
    out = tmp_path / "run.csv"
    svg_dir = tmp_path / "svgs"
    rc = cli_main([
        "plan", "--scenario", "demo", "--planner", "bitstar", "--seed", "7",
        "--max-batches", "2", "--out", str(out), "--svg-dir", str(svg_dir),
    ])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "elapsed_s,cost,batch,tree_vertices,samples_drawn"
    assert len(lines) > 1
    snapshots = sorted(p.name for p in svg_dir.iterdir())
    assert snapshots[0] == "batch_000.svg"
    assert len(snapshots) == 3  # boundaries of batches 0, 1, 2


def test_unknown_planner_is_usage_error(capsys, tmp_path):
    rc = cli_main(["plan", "--scenario", "demo", "--planner", "dijkstra"])
    assert rc == 1
    assert "planner" in capsys.readouterr().err


def test_missing_subcommand_is_usage_error():
    assert cli_main([]) == 1


def test_missing_scenario_is_runtime_error(capsys):
    rc = cli_main(["plan", "--scenario", "/does/not/exist.scn", "--planner", "bitstar"])
    assert rc == 2
    assert "scenario" in capsys.readouterr().err


def test_broken_scenario_is_runtime_error(tmp_path, capsys):
    bad = tmp_path / "bad.scn"
    bad.write_text("[world]\nbounds = 0 0\n")
    rc = cli_main(["plan", "--scenario", str(bad), "--planner", "bitstar"])
    assert rc == 2
    assert "bounds" in capsys.readouterr().err


def test_bench_reproducible_bytes(tmp_path):
    outs = []
    for name in ("a.csv", "b.csv"):
        out = tmp_path / name
        rc = cli_main([
            "bench", "--scenario", "demo", "--planner", "rrtstar", "--trials", "2",
            "--time-budget", "0.4", "--grid-step", "0.1", "--out", str(out),
        ])
        assert rc == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    assert outs[0].startswith(b"t_s,n_solved,median_cost,mean_cost\n")


def test_bench_seed_override_changes_results(tmp_path):
    texts = []
    for seed in ("1", "2"):
        out = tmp_path / f"s{seed}.csv"
        rc = cli_main([
            "bench", "--scenario", "demo", "--planner", "bitstar", "--trials", "1",
            "--max-batches", "1", "--seed", seed, "--out", str(out),
            "--grid-step", "0.05",
        ])
        assert rc == 0
        texts.append(out.read_text())
    assert texts[0] != texts[1]


def test_demo_subcommand(tmp_path):
    svg_dir = tmp_path / "snaps"
    out = tmp_path / "demo.csv"
    rc = cli_main([
        "demo", "--seed", "3", "--max-batches", "1",
        "--svg-dir", str(svg_dir), "--out", str(out),
    ])
    assert rc == 0
    assert (svg_dir / "batch_000.svg").exists()
    assert (svg_dir / "batch_001.svg").exists()
    assert out.exists()


def test_plan_on_grid_scenario_file(tmp_path):
    (tmp_path / "wall.pgm").write_text(
        "P2\n10 10\n255\n"
        + "\n".join(
            " ".join("0" if row == 5 and col not in (7, 8) else "255" for col in range(10))
            for row in range(10)
        )
        + "\n"
    )
    scn = tmp_path / "wall.scn"
    scn.write_text(
        """
[world]
bounds = 0 0 10 10
[grid]
file = wall.pgm
meters_per_cell = 1
origin = 0 0
threshold = 127
[problem]
root = 5 2
goal_center = 5 9
goal_radius = 0.5
[bitstar]
batch_size = 40
rho = 6
[rrtstar]
eta = 2
alpha = 10
goal_period = 25
[stop]
max_batches = 4
"""
    )
    out = tmp_path / "grid_run.csv"
    rc = cli_main(["plan", "--scenario", str(scn), "--planner", "bitstar",
                   "--seed", "3", "--out", str(out)])
    assert rc == 0
    rows = out.read_text().splitlines()
    assert len(rows) >= 2
    final_cost = float(rows[-1].split(",")[1])
    assert 7.0 < final_cost < 14.0  # detour through the gap


def test_plan_without_outputs_just_summarizes(capsys):
    rc = cli_main(["plan", "--scenario", "demo", "--planner", "rrtstar",
                   "--seed", "2", "--time-budget", "0.2"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "rrtstar seed=2" in out


def test_help_exits_zero(capsys):
    assert cli_main(["--help"]) == 0
    assert "bitplan" in capsys.readouterr().out
