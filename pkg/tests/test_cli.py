import subprocess
import sys
from pathlib import Path

import pytest

from cvflab.cli import config_hash, build_parser, main, parse_bytes

GOLDEN = Path(__file__).parent / "golden"


def run(*argv):
    return main([str(a) for a in argv])


def test_gen_graph_ring(tmp_path, capsys):
    assert run("gen-graph", "--topology", "ring", "--n", 5, "--out", tmp_path) == 0
    lines = (tmp_path / "graph.txt").read_text().splitlines()
    assert len(lines) == 5
    assert str(tmp_path / "graph.txt") in capsys.readouterr().out


def test_gen_graph_k4(tmp_path):
    assert run("gen-graph", "--topology", "random-regular", "--n", 4, "--degree", 3, "--seed", 1, "--out", tmp_path) == 0
    assert (tmp_path / "graph.txt").read_text() == "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n"


def test_gen_graph_bad_degree_is_usage_error(tmp_path, capsys):
    assert run("gen-graph", "--topology", "random-regular", "--n", 4, "--degree", 5, "--out", tmp_path) == 2
    assert "degree" in capsys.readouterr().err


def test_analyze_full_token_ring_golden(tmp_path):
    assert run("analyze-full", "--program", "token-ring", "--n", 5, "--out", tmp_path) == 0
    assert (tmp_path / "report.csv").read_bytes() == (GOLDEN / "token_ring_n5_report.csv").read_bytes()


def test_analyze_full_coloring_histograms(tmp_path):
    assert run("analyze-full", "--program", "coloring", "--n", 3, "--out", tmp_path) == 0
    text = (tmp_path / "histogram.csv").read_text()
    assert ",program," in text and ",cvf," in text


def test_analyze_full_matching_path(tmp_path):
    assert run("analyze-full", "--program", "matching", "--topology", "path", "--n", 2, "--out", tmp_path,
               "--format", "json", "--rank", "avg") == 0
    import json
    (row,) = json.loads((tmp_path / "report.json").read_text())
    assert row["rank_kind"] == "average" and row["rel_cvf"] > 0


def test_analyze_full_from_edge_list(tmp_path):
    g = tmp_path / "g.txt"
    g.write_text("0 1\n1 2\n2 3\n3 0\n0 2\n")
    assert run("analyze-full", "--program", "coloring", "--graph-file", g, "--out", tmp_path / "o") == 0
    assert "edge-list" in (tmp_path / "o" / "report.csv").read_text()


def test_budget_refusal_exits_3(tmp_path, capsys):
    assert run("analyze-full", "--program", "token-ring", "--n", 7, "--memory-budget", "10K", "--out", tmp_path) == 3
    assert "analyze-partial" in capsys.readouterr().err
    assert not (tmp_path / "report.csv").exists()


def test_token_ring_rejects_topology(tmp_path):
    assert run("analyze-full", "--program", "token-ring", "--n", 5, "--topology", "power-law", "--attach", 1,
               "--out", tmp_path) == 2


def test_missing_graph_file_is_io_error(tmp_path):
    assert run("analyze-full", "--program", "coloring", "--graph-file", tmp_path / "none.txt", "--out", tmp_path) == 5


def test_non_stabilizing_start_is_reported_with_exit_4(tmp_path, monkeypatch):
    from cvflab import cli
    from cvflab.errors import StabilizationError

    def boom(*a, **k):
        raise StabilizationError("cycle")
    monkeypatch.setattr(cli, "analyze_full", boom)
    assert run("analyze-full", "--program", "token-ring", "--n", 3, "--out", tmp_path) == 4


def test_dump_ranks(tmp_path):
    assert run("analyze-full", "--program", "token-ring", "--n", 4, "--dump-ranks", "--out", tmp_path) == 0
    assert (tmp_path / "ranks-max.bin").read_bytes()[:4] == b"CVFR"


def test_simulate_interval_zero_equals_baseline(tmp_path):
    assert run("simulate", "--program", "coloring", "--n", 5, "--cvf-interval", "0", "--num-states", 3,
               "--scatter", "--out", tmp_path) == 0
    from cvflab.io import read_table
    rows = read_table(tmp_path / "simulation.csv")
    assert len(rows) == 3
    assert all(r["convergence_steps"] == r["baseline_steps"] and r["ratio"] == 1 for r in rows)
    assert len(read_table(tmp_path / "scatter.csv")) == 15


def test_fit_subcommand(tmp_path):
    run("analyze-full", "--program", "token-ring", "--n", 5, "--out", tmp_path / "a")
    assert run("fit", "--histogram", tmp_path / "a" / "histogram.csv", "--out", tmp_path / "f") == 0
    lines = (tmp_path / "f" / "fit.csv").read_text().splitlines()
    assert lines[0] == "source,rank_kind,fit_A,fit_B,fit_r2,bins"
    assert "cvf,average,0.0993472,1.24012,0.842784" in lines[4]


def test_default_output_dir_uses_hash_and_env(tmp_path, monkeypatch):
    monkeypatch.setenv("CVFLAB_OUT", str(tmp_path))
    assert run("gen-graph", "--topology", "ring", "--n", 4) == 0
    (sub,) = tmp_path.iterdir()
    assert sub.name.startswith("gen-graph-") and (sub / "graph.txt").exists()


def test_hash_ignores_workers_but_not_seed():
    p = build_parser()
    base = ["analyze-partial", "--program", "token-ring", "--n", "5"]
    h1 = config_hash(p.parse_args(base + ["--workers", "1"]))
    assert h1 == config_hash(p.parse_args(base + ["--workers", "4"]))
    assert h1 != config_hash(p.parse_args(base + ["--seed", "1"]))


def test_parse_bytes():
    assert parse_bytes("8G") == 8 * 2**30
    assert parse_bytes("512MiB") == 512 * 2**20
    assert parse_bytes("1000") == 1000


def test_bad_flag_exits_2():
    with pytest.raises(SystemExit) as err:
        main(["analyze-full", "--program", "bogus", "--n", "3"])
    assert err.value.code == 2


@pytest.mark.parametrize("cmd", [
    ["analyze-partial", "--program", "token-ring", "--n", "5", "--num-states", "150", "--paths-per-state", "20"],
    ["simulate", "--program", "matching", "--n", "5", "--num-states", "5", "--cvf-interval", "1,4", "--scatter"],
    ["analyze-full", "--program", "coloring", "--topology", "random-regular", "--degree", "3", "--n", "6"],
])
def test_byte_identical_across_workers(tmp_path, cmd):
    run(*cmd, "--seed", 3, "--workers", 1, "--out", tmp_path / "w1")
    run(*cmd, "--seed", 3, "--workers", 3, "--out", tmp_path / "w3")
    names = sorted(p.name for p in (tmp_path / "w1").iterdir())
    assert names == sorted(p.name for p in (tmp_path / "w3").iterdir())
    for name in names:
        assert (tmp_path / "w1" / name).read_bytes() == (tmp_path / "w3" / name).read_bytes()


def test_module_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "cvflab", "gen-graph", "--topology", "ring", "--n", "3",
                          "--out", str(tmp_path)], capture_output=True, text=True)
    assert out.returncode == 0 and (tmp_path / "graph.txt").exists()
