"""Experiment configs, runners, and the deterministic CSV contract."""

import math

import pytest

from conclab.experiments import (
    ConfigError,
    config_hash,
    load_config,
    render_csv,
    run_experiment,
    run_folner,
    run_free_group,
    run_hamming,
    run_tube,
)


class TestConfig:
    def test_defaults_validate(self):
        for name in ("tube", "free-group", "folner", "hamming", "fibre"):
            cfg = load_config(name)
            assert cfg["experiment"] == name

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError):
            load_config("tube", {"bogus": 1})
        with pytest.raises(ConfigError):
            load_config("tube", {"grid": {"qq": [1]}})

    def test_experiment_mismatch_rejected(self):
        with pytest.raises(ConfigError):
            load_config("tube", {"experiment": "hamming"})

    def test_value_validation(self):
        with pytest.raises(ConfigError):
            load_config("hamming", {"max_n": 7})
        with pytest.raises(ConfigError):
            load_config("tube", {"samples": 0})
        with pytest.raises(ConfigError):
            load_config("free-group", {"convention": "sideways"})
        with pytest.raises(ConfigError):
            load_config("fibre", {"grid": [[5, 5, 1.0, 0.3]]})
        with pytest.raises(ConfigError):
            load_config("folner", {"group": {"kind": "nope"}})

    def test_overrides_win(self):
        cfg = load_config("hamming", {"max_n": 50}, {"max_n": 20})
        assert cfg["max_n"] == 20

    def test_hash_ignores_non_math_keys(self):
        a = load_config("hamming", {"max_n": 30, "out": "x"})
        b = load_config("hamming", {"max_n": 30, "out": "y", "workers": 4})
        assert config_hash(a) == config_hash(b)
        c = load_config("hamming", {"max_n": 32})
        assert config_hash(a) != config_hash(c)


class TestCsvFormat:
    def test_metadata_and_digits(self):
        cfg = load_config("hamming", {"max_n": 6})
        table = run_experiment("hamming", cfg)
        text = render_csv(table, cfg)
        lines = text.splitlines()
        assert lines[0].startswith("# tool=conclab ")
        assert "# experiment=hamming" in lines
        assert f"# seed={cfg['seed']}" in lines
        assert any(line.startswith("# config_hash=") for line in lines)
        header_idx = next(i for i, l in enumerate(lines) if not l.startswith("#"))
        assert lines[header_idx] == "n,phi_before,phi_after,amplification"
        # 12 significant digits for non-terminating decimals
        assert lines[header_idx + 2] == "6,0.333333333333,1,3"

    def test_rerun_byte_identical(self):
        cfg = load_config("free-group", {"samples": 500, "ball_radius": 4})
        a = render_csv(run_experiment("free-group", cfg), cfg)
        b = render_csv(run_experiment("free-group", cfg), cfg)
        assert a == b


class TestTubeRunner:
    def test_columns_and_dominance(self):
        cfg = load_config(
            "tube",
            {"samples": 2000, "grid": {"n": [50, 100], "k": [2, 5], "epsilon": [0.3], "C": [0.1]}},
        )
        table = run_tube(cfg)
        assert table.columns[:4] == ["n", "k", "epsilon", "C"]
        assert table.meta["dominance_violations"] == 0
        exact = table.columns.index("tube_exact")
        rec = table.columns.index("recursive_bound")
        simp = table.columns.index("simplified_bound")
        for row in table.rows:
            assert row[simp] <= row[rec] <= row[exact]

    def test_default_grid_ratio_strictly_decreasing(self):
        cfg = load_config("tube", {"samples": 1000})
        table = run_tube(cfg)
        col = table.columns.index("exp_minus_Cn_ratio")
        ratios = [row[col] for row in table.rows]
        assert all(b < a for a, b in zip(ratios, ratios[1:]))

    def test_degenerate_row(self):
        cfg = load_config(
            "tube", {"samples": 500, "grid": {"n": [10], "k": [0], "epsilon": [0.3], "C": [0.1]}}
        )
        table = run_tube(cfg)
        row = dict(zip(table.columns, table.rows[0]))
        assert row["tube_exact"] == 1.0
        assert row["tube_mc"] == 1.0
        assert row["recursive_bound"] is None

    def test_parallel_matches_serial(self):
        base = {"samples": 2000, "grid": {"n": [20, 30], "k": [1], "epsilon": [0.4], "C": [0.2]}}
        cfg1 = load_config("tube", base, {"workers": 1})
        cfg2 = load_config("tube", base, {"workers": 2})
        assert render_csv(run_tube(cfg1), cfg1) == render_csv(run_tube(cfg2), cfg2)


class TestFreeGroupRunner:
    def test_rows_and_meta(self):
        cfg = load_config("free-group", {"samples": 1000, "ball_radius": 5})
        table = run_free_group(cfg)
        assert [r[0] for r in table.rows] == ["A1", "A2"]
        a1 = dict(zip(table.columns, table.rows[0]))
        a2 = dict(zip(table.columns, table.rows[1]))
        assert a1["violations_of_A1_chain"] == 0
        assert a2["candidate_vector_min"] == pytest.approx(math.sqrt(2) / 3, abs=1e-12)
        assert table.meta["a1_inclusion_exceptions"] == 0
        assert table.meta["a2_pigeonhole_exceptions"] == 0
        assert table.meta["candidate_meets_stated_bound"] == 0
        assert "q50" in a2["min_over_i_distribution_quantiles"]

    def test_index_range_validation(self):
        with pytest.raises(ConfigError):
            load_config("free-group", {"index_range": 0})


class TestFolnerRunner:
    def test_z_final_ratio(self):
        cfg = load_config("folner", {"length": 50})
        table = run_folner(cfg)
        assert table.rows[-1][table.columns.index("boundary_ratio")] == 2.0 / 50.0

    def test_heisenberg(self):
        cfg = load_config("folner", {"length": 4, "group": {"kind": "heisenberg"}})
        table = run_folner(cfg)
        assert table.rows[-1][2] == 4 * 4 * 16


class TestFibreRunner:
    def test_no_violations(self):
        cfg = load_config("fibre", {"samples": 20000})
        table = run_experiment("fibre", cfg)
        assert table.meta["violation_count"] == 0
        assert all(row[-1] is False or row[-1] == 0 for row in table.rows)


class TestHammingRunner:
    def test_example_row(self):
        cfg = load_config("hamming", {"max_n": 8})
        table = run_hamming(cfg)
        assert table.rows[1] == [6, 1.0 / 3.0, 1.0, 3.0]
