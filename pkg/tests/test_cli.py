"""Command line interface: subcommands, outputs, exit codes."""

import json

from conclab.betainc import NonConvergenceError
from conclab.cli import main


def test_hamming_writes_csv(tmp_path):
    out = tmp_path / "run"
    code = main(["hamming", "--max-n", "10", "--out", str(out)])
    assert code == 0
    text = (out / "hamming.csv").read_text()
    assert "6,0.333333333333,1,3" in text


def test_svg_flag_renders_figures(tmp_path):
    out = tmp_path / "run"
    code = main(["hamming", "--max-n", "8", "--out", str(out), "--svg"])
    assert code == 0
    assert (out / "hamming_phi.svg").exists()
    assert (out / "hamming_amplification.svg").exists()
    assert (out / "hamming_phi.svg").read_text().startswith("<?xml")


def test_rerun_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert main(["folner", "--length", "12", "--out", str(out), "--svg"]) == 0
    assert (a / "folner.csv").read_bytes() == (b / "folner.csv").read_bytes()
    assert (a / "folner_ratio.svg").read_bytes() == (b / "folner_ratio.svg").read_bytes()


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"experiment": "hamming", "max_n": 30}))
    out = tmp_path / "o"
    assert main(["hamming", "--config", str(cfg), "--max-n", "6", "--out", str(out)]) == 0
    lines = (out / "hamming.csv").read_text().splitlines()
    data = [l for l in lines if not l.startswith("#")]
    assert len(data) == 1 + 2  # header + n in {4, 6}


def test_unknown_config_key_exit_2(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"experiment": "hamming", "bogus": True}))
    assert main(["hamming", "--config", str(cfg), "--out", str(tmp_path / "x")]) == 2


def test_bad_value_exit_2(tmp_path):
    assert main(["hamming", "--max-n", "7", "--out", str(tmp_path / "x")]) == 2


def test_free_group_folner_request_exit_2(tmp_path):
    code = main(
        ["folner", "--group", '{"kind":"free"}', "--length", "4", "--out", str(tmp_path / "x")]
    )
    assert code == 2


def test_missing_config_file_exit_2(tmp_path):
    assert main(["hamming", "--config", str(tmp_path / "nope.json")]) == 2


def test_nonconvergence_exit_3(tmp_path, monkeypatch):
    import conclab.cli as cli_mod

    def explode(experiment, cfg):
        raise NonConvergenceError("synthetic")

    monkeypatch.setattr(cli_mod, "run_experiment", explode)
    assert main(["hamming", "--max-n", "6", "--out", str(tmp_path / "x")]) == 3


def test_report_runs_everything(tmp_path):
    out = tmp_path / "rep"
    code = main(["report", "--out", str(out), "--seed", "99", "--samples", "2000"])
    assert code == 0
    for name in ("tube", "free_group", "folner", "hamming", "fibre"):
        assert (out / f"{name}.csv").exists(), name
    assert (out / "folner_ratio.svg").exists()
    assert (out / "tube_ratio.svg").exists()
    assert (out / "tube_bounds.svg").exists()
    assert (out / "free_group_min_norm.svg").exists()
    assert (out / "fibre_margin.svg").exists()


def test_free_group_exit_zero_regardless_of_findings(tmp_path):
    # findings are data: the stated-bound failure must not fail the tool
    out = tmp_path / "fg"
    code = main(
        ["free-group", "--samples", "500", "--ball-radius", "4", "--out", str(out)]
    )
    assert code == 0
    text = (out / "free_group.csv").read_text()
    assert "# candidate_meets_stated_bound=0" in text
