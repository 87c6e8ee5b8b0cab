import pytest

from infmax.cli import main

from test_harness import write_graph


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def prepared(tmp_path, capsys):
    graph = write_graph(tmp_path, n=14, m=40, seed=2)
    ann = tmp_path / "g.ann"
    code, out, _ = run_cli([
        "prepare", "--edges", str(graph), "--out", str(ann),
        "--prob", "uniform:0.3", "--costs", "1:3",
        "--delay", "poisson:1:4:3", "--seed", "5",
    ], capsys)
    assert code == 0
    return graph, ann


class TestPrepare:
    def test_writes_files_and_echoes_stats(self, tmp_path, capsys):
        graph = write_graph(tmp_path, n=14, m=40, seed=2)
        ann = tmp_path / "g.ann"
        code, out, _ = run_cli([
            "prepare", "--edges", str(graph), "--out", str(ann),
            "--prob", "uniform:0.3", "--costs", "1:3",
            "--delay", "poisson:1:4:3", "--T-note", "10", "--seed", "5",
        ], capsys)
        assert code == 0
        assert ann.exists() and (tmp_path / "g.ann.labels").exists()
        assert "n=14 m=40" in out
        assert "# note: T=10" in ann.read_text()

    def test_missing_edges_flag_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["prepare", "--out", "x.ann"])
        assert exc.value.code == 2

    def test_same_flags_give_identical_bytes(self, tmp_path, capsys):
        graph = write_graph(tmp_path, n=10, m=20, seed=3)
        args = ["prepare", "--edges", str(graph), "--prob", "trivalency",
                "--costs", "50:100", "--delay", "poisson:1:20:10",
                "--seed", "42"]
        a, b = tmp_path / "a.ann", tmp_path / "b.ann"
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        capsys.readouterr()
        assert a.read_bytes() == b.read_bytes()
        assert (tmp_path / "a.ann.labels").read_bytes() == \
            (tmp_path / "b.ann.labels").read_bytes()

    def test_unreadable_input_is_runtime_error(self, tmp_path, capsys):
        code, _, err = run_cli([
            "prepare", "--edges", str(tmp_path / "missing.txt"),
            "--out", str(tmp_path / "x.ann"),
        ], capsys)
        assert code == 1 and "error:" in err


class TestSelect:
    def test_budget_zero_writes_empty_file(self, prepared, tmp_path, capsys):
        _, ann = prepared
        seeds = tmp_path / "seeds.txt"
        code, out, _ = run_cli([
            "select", "--graph", str(ann), "--algo", "deg", "--budget", "0",
            "--out", str(seeds),
        ], capsys)
        assert code == 0
        assert "seeds=0 total_cost=0" in out
        assert seeds.read_text() == ""

    def test_approx_and_celfpp_agree(self, prepared, tmp_path, capsys):
        _, ann = prepared
        out_a = tmp_path / "a.seeds"
        out_b = tmp_path / "b.seeds"
        common = ["--budget", "6", "--T", "5", "--R", "200", "--seed", "9"]
        assert main(["select", "--graph", str(ann), "--algo", "approx",
                     "--out", str(out_a)] + common) == 0
        assert main(["select", "--graph", str(ann), "--algo", "celfpp",
                     "--out", str(out_b)] + common) == 0
        capsys.readouterr()
        assert out_a.read_bytes() == out_b.read_bytes()

    def test_naive_warns_on_large_graph(self, tmp_path, capsys):
        # graph over the size guard; budget 0 keeps the run instant
        lines = "".join(f"{i} {i+1}\n" for i in range(1200))
        graph = tmp_path / "big.txt"
        graph.write_text(lines)
        ann = tmp_path / "big.ann"
        assert main(["prepare", "--edges", str(graph), "--out", str(ann),
                     "--prob", "uniform:0.1", "--costs", "1:1",
                     "--delay", "poisson:1:2:2", "--seed", "1"]) == 0
        capsys.readouterr()
        import warnings
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            code, out, err = run_cli([
                "select", "--graph", str(ann), "--algo", "naive",
                "--budget", "0", "--out", str(tmp_path / "s.txt"),
            ], capsys)
        assert code == 0
        assert "naive greedy" in err and "slow" in err

    def test_unknown_algorithm_is_usage_error(self, prepared, tmp_path):
        _, ann = prepared
        with pytest.raises(SystemExit) as exc:
            main(["select", "--graph", str(ann), "--algo", "magic",
                  "--budget", "1", "--out", str(tmp_path / "s.txt")])
        assert exc.value.code == 2

    def test_negative_budget_is_usage_error(self, prepared, tmp_path):
        _, ann = prepared
        with pytest.raises(SystemExit) as exc:
            main(["select", "--graph", str(ann), "--algo", "deg",
                  "--budget", "-3", "--out", str(tmp_path / "s.txt")])
        assert exc.value.code == 2


class TestEvaluate:
    def test_all_nodes_mean_is_n(self, prepared, tmp_path, capsys):
        _, ann = prepared
        from infmax.graphs import read_annotated
        from infmax.selection import SeedSet, write_seed_set
        g = read_annotated(ann)
        seeds = tmp_path / "all.seeds"
        write_seed_set(g, SeedSet(list(range(g.n)), int(g.cost.sum()),
                                  int(g.cost.sum())), seeds)
        code, out, _ = run_cli([
            "evaluate", "--graph", str(ann), "--seeds", str(seeds),
            "--T", "5", "--R", "200", "--seed", "1",
        ], capsys)
        assert code == 0
        assert f"mean={float(g.n):.4f}" in out
        assert "stddev=0.0000" in out

    def test_empty_seed_file_is_runtime_error(self, prepared, tmp_path,
                                              capsys):
        _, ann = prepared
        seeds = tmp_path / "empty.seeds"
        seeds.write_text("")
        code, _, err = run_cli([
            "evaluate", "--graph", str(ann), "--seeds", str(seeds),
        ], capsys)
        assert code == 1 and "error:" in err

    def test_default_trial_count_is_10000(self, prepared, tmp_path, capsys):
        _, ann = prepared
        from infmax.graphs import read_annotated
        from infmax.selection import SeedSet, write_seed_set
        g = read_annotated(ann)
        seeds = tmp_path / "one.seeds"
        write_seed_set(g, SeedSet([0], int(g.cost[0]), 100), seeds)
        code, out, _ = run_cli([
            "evaluate", "--graph", str(ann), "--seeds", str(seeds),
        ], capsys)
        assert code == 0 and "trials=10000" in out

    def test_unknown_label_is_runtime_error(self, prepared, tmp_path, capsys):
        _, ann = prepared
        seeds = tmp_path / "bad.seeds"
        seeds.write_text("1 9999 1 1\n")
        code, _, err = run_cli([
            "evaluate", "--graph", str(ann), "--seeds", str(seeds),
        ], capsys)
        assert code == 1 and "unknown node label" in err


def sweep_config(tmp_path, graph, algorithms, budgets, extra=""):
    cfg = tmp_path / "sweep.cfg"
    cfg.write_text(
        f"graph_path={graph}\n"
        f"budgets={budgets}\n"
        f"algorithms={algorithms}\n"
        "probability=uniform:0.3\n"
        "cost_lo=1\ncost_hi=3\n"
        "deadline_T=4\n"
        "lambda_min=1\nlambda_max=3\nmax_offset=2\n"
        "selection_trials_R=60\nevaluation_trials_R=150\n"
        "master_seed=7\ntimed=false\n" + extra)
    return cfg


class TestSweep:
    def test_minimal_config_single_row(self, tmp_path, capsys):
        graph = write_graph(tmp_path, n=10, m=24, seed=4)
        cfg = sweep_config(tmp_path, graph, "deg", "4")
        out_dir = tmp_path / "out"
        code, out, _ = run_cli(["sweep", "--config", str(cfg),
                                "--out-dir", str(out_dir)], capsys)
        assert code == 0
        lines = (out_dir / "sweep.csv").read_text().strip().split("\n")
        assert len(lines) == 2

    def test_eight_budgets_times_eight_algorithms(self, tmp_path, capsys):
        graph = write_graph(tmp_path, n=12, m=30, seed=5)
        cfg = sweep_config(
            tmp_path, graph,
            "approx,lazy-sim,lazy-approx,celfpp,deg,ddh,sdh,irie",
            "2,4,6,8,10,12,14,16")
        out_dir = tmp_path / "out"
        code, out, _ = run_cli(["sweep", "--config", str(cfg),
                                "--out-dir", str(out_dir)], capsys)
        assert code == 0
        lines = (out_dir / "sweep.csv").read_text().strip().split("\n")
        assert len(lines) == 1 + 64
        assert (out_dir / "compare.txt").exists()

    def test_sweep_matches_prepare_plus_evaluate(self, tmp_path, capsys):
        # the sweep's internal annotation and evaluation must agree with the
        # prepare/evaluate commands run with the same seed and parameters
        graph = write_graph(tmp_path, n=12, m=30, seed=6)
        cfg = sweep_config(tmp_path, graph, "deg", "6")
        out_dir = tmp_path / "out"
        assert main(["sweep", "--config", str(cfg),
                     "--out-dir", str(out_dir)]) == 0
        csv_line = (out_dir / "sweep.csv").read_text().strip().split("\n")[1]
        spread_mean = float(csv_line.split(",")[3])

        ann = tmp_path / "g.ann"
        assert main(["prepare", "--edges", str(graph), "--out", str(ann),
                     "--prob", "uniform:0.3", "--costs", "1:3",
                     "--delay", "poisson:1:3:2", "--seed", "7"]) == 0
        capsys.readouterr()
        code, out, _ = run_cli([
            "evaluate", "--graph", str(ann),
            "--seeds", str(out_dir / "graph_deg_6.seeds"),
            "--T", "4", "--R", "150", "--seed", "7",
        ], capsys)
        assert code == 0
        assert f"mean={spread_mean:.4f}" in out

    def test_malformed_key_exits_nonzero_naming_key(self, tmp_path, capsys):
        graph = write_graph(tmp_path, n=10, m=24, seed=4)
        cfg = sweep_config(tmp_path, graph, "deg", "4", extra="typo_key=1\n")
        code, _, err = run_cli(["sweep", "--config", str(cfg),
                                "--out-dir", str(tmp_path / "o")], capsys)
        assert code == 1 and "typo_key" in err


class TestStats:
    def test_single_edge(self, tmp_path, capsys):
        p = tmp_path / "g.txt"
        p.write_text("0 1\n")
        code, out, _ = run_cli(["stats", "--input", str(p)], capsys)
        assert code == 0
        assert "n=2 m=1" in out

    def test_annotated_input(self, prepared, capsys):
        _, ann = prepared
        code, out, _ = run_cli(["stats", "--input", str(ann)], capsys)
        assert code == 0 and "n=14 m=40" in out

    def test_unreadable_input(self, tmp_path, capsys):
        code, _, err = run_cli(["stats", "--input",
                                str(tmp_path / "nope.txt")], capsys)
        assert code == 1 and "error:" in err
