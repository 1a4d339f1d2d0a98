import csv
import json

import pytest

from simax import bench
from simax.bench import (
    ALGORITHMS,
    CSV_HEADER,
    BenchError,
    ExperimentPlan,
    ReportRow,
    aggregate_rows,
    read_rows_csv,
    run_trials,
    write_report,
    write_rows_csv,
)
from simax.cli import main
from simax.learning import load_model

EXPECTED_HEADER = (
    "scenario,n,seed,phase,algorithm,tree_steps,dominance_checks,"
    "sort_comparisons,update_sorted_points,entropy_total,wall_time_ns,verified"
)


def _row(**overrides) -> ReportRow:
    base = dict(
        scenario="uniform_square",
        n=16,
        seed=3,
        phase="limiting",
        algorithm="self_improving",
        tree_steps=40,
        dominance_checks=20,
        sort_comparisons=5,
        update_sorted_points=7,
        entropy_total=12.25,
        wall_time_ns=0,
        verified=True,
    )
    base.update(overrides)
    return ReportRow(**base)


# ---------------------------------------------------------------------------
# rows and files


def test_csv_header_is_frozen(tmp_path):
    path = tmp_path / "empty.csv"
    write_rows_csv([], path)
    data = path.read_bytes()
    assert data == (EXPECTED_HEADER + "\n").encode()
    assert b"\r" not in data


def test_row_round_trip_through_file(tmp_path):
    rows = [
        _row(),
        _row(algorithm="sort_scan", verified=False, entropy_total=0.0),
        _row(algorithm="brute_force", verified=None, tree_steps=0),
    ]
    path = tmp_path / "rows.csv"
    write_rows_csv(rows, path)
    assert read_rows_csv(path) == rows


def test_verified_column_uses_three_states(tmp_path):
    path = tmp_path / "rows.csv"
    write_rows_csv([_row(verified=True), _row(verified=False), _row(verified=None)], path)
    states = [line.rsplit(",", 1)[1] for line in path.read_text().splitlines()[1:]]
    assert states == ["true", "false", "skipped"]


def test_read_rejects_unknown_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,c\n1,2,3\n", encoding="utf-8")
    with pytest.raises(BenchError, match="unexpected header"):
        read_rows_csv(path)


def test_read_rejects_malformed_rows(tmp_path):
    path = tmp_path / "bad.csv"
    good = ",".join(_row().to_csv())
    mangled = good.replace("40", "forty", 1)
    path.write_text(EXPECTED_HEADER + "\n" + mangled + "\n", encoding="utf-8")
    with pytest.raises(BenchError, match="bad.csv:2"):
        read_rows_csv(path)
    path.write_text(EXPECTED_HEADER + "\n" + good.replace("true", "maybe") + "\n", encoding="utf-8")
    with pytest.raises(BenchError, match="verified"):
        read_rows_csv(path)


def test_plan_validation(model_cache):
    model = model_cache("uniform_square", 16)
    with pytest.raises(BenchError, match="trials"):
        ExperimentPlan(model=model, trials=0, seed=0)
    with pytest.raises(BenchError, match="unknown algorithms"):
        ExperimentPlan(model=model, trials=1, seed=0, algorithms=("self_improving", "quantum"))


# ---------------------------------------------------------------------------
# trials


def test_run_trials_layout_and_verification(model_cache):
    model = model_cache("uniform_square", 16)
    rows = run_trials(ExperimentPlan(model=model, trials=3, seed=50))
    assert len(rows) == 9
    assert [r.algorithm for r in rows[:3]] == list(ALGORITHMS)
    assert [r.seed for r in rows] == [50, 50, 50, 51, 51, 51, 52, 52, 52]
    for r in rows:
        assert r.scenario == "uniform_square" and r.n == 16 and r.phase == "limiting"
        assert r.verified is True
        assert r.wall_time_ns == 0
        if r.algorithm == "self_improving":
            assert r.entropy_total == model.entropy_total
            assert r.tree_steps > 0
        elif r.algorithm == "sort_scan":
            assert r.entropy_total == 0.0
            assert r.sort_comparisons > 0
        else:
            assert r.dominance_checks == 16 * 15  # every ordered pair


def test_trial_inputs_replay_from_the_seed_column(model_cache):
    model = model_cache("uniform_square", 16)
    a = run_trials(ExperimentPlan(model=model, trials=2, seed=7))
    b = run_trials(ExperimentPlan(model=model, trials=1, seed=8))
    # trial 1 of seed 7 and trial 0 of seed 8 are the same input: seed column 8
    assert [r for r in a if r.seed == 8] == b


def test_timing_flag_fills_wall_time(model_cache):
    model = model_cache("uniform_square", 16)
    rows = run_trials(ExperimentPlan(model=model, trials=1, seed=0, timing=True))
    assert all(r.wall_time_ns > 0 for r in rows)


def test_oversized_inputs_skip_the_quadratic_oracle(model_cache, monkeypatch):
    model = model_cache("uniform_square", 16)
    monkeypatch.setattr(bench, "BRUTE_FORCE_LIMIT", 8)
    rows = run_trials(ExperimentPlan(model=model, trials=1, seed=0))
    brute = [r for r in rows if r.algorithm == "brute_force"]
    assert len(brute) == 1
    assert brute[0].verified is None
    assert brute[0].dominance_checks == 0


# ---------------------------------------------------------------------------
# aggregation and report


def test_aggregate_groups_and_averages():
    rows = [
        _row(tree_steps=10, dominance_checks=0, sort_comparisons=0),
        _row(tree_steps=30, dominance_checks=0, sort_comparisons=0),
        _row(algorithm="sort_scan", verified=None),
    ]
    summary = aggregate_rows(rows)
    assert len(summary) == 1  # the skipped row drops out
    s = summary[0]
    assert (s.scenario, s.n, s.algorithm, s.rows) == ("uniform_square", 16, "self_improving", 2)
    assert s.mean_work_per_point == pytest.approx((10 / 16 + 30 / 16) / 2)
    assert s.all_verified


def test_aggregate_requires_measured_rows():
    with pytest.raises(BenchError, match="no measured rows"):
        aggregate_rows([])
    with pytest.raises(BenchError, match="no measured rows"):
        aggregate_rows([_row(verified=None)])


def test_write_report_emits_summary_and_charts(tmp_path, model_cache):
    model = model_cache("uniform_square", 16)
    rows = run_trials(ExperimentPlan(model=model, trials=2, seed=0))
    paths = write_report(rows, tmp_path / "report")
    names = [p.name for p in paths]
    assert names == ["summary.csv", "work_per_point.svg", "cost_vs_entropy.svg"]
    for p in paths:
        assert p.exists() and p.stat().st_size > 0
    with open(paths[0], encoding="utf-8", newline="") as fh:
        records = list(csv.DictReader(fh))
    assert {r["algorithm"] for r in records} == set(ALGORITHMS)
    svg = paths[1].read_text(encoding="utf-8")
    assert svg.startswith("<svg xmlns=") and svg.endswith("</svg>\n")
    assert "\r" not in svg


# ---------------------------------------------------------------------------
# command line


def test_cli_round_trip(tmp_path, capsys):
    model_path = tmp_path / "model.json"
    rc = main(
        ["train", "--scenario", "uniform_square", "--n", "16", "--seed", "9", "--out", str(model_path)]
    )
    assert rc == 0
    assert load_model(model_path).n == 16

    csv_a = tmp_path / "a.csv"
    csv_b = tmp_path / "b.csv"
    assert main(["run", "--model", str(model_path), "--trials", "4", "--seed", "2", "--out", str(csv_a)]) == 0
    assert main(["run", "--model", str(model_path), "--trials", "4", "--seed", "2", "--out", str(csv_b)]) == 0
    assert csv_a.read_bytes() == csv_b.read_bytes()
    assert len(read_rows_csv(csv_a)) == 12

    report_dir = tmp_path / "report"
    assert main(["report", "--in", str(csv_a), str(csv_b), "--out", str(report_dir)]) == 0
    assert (report_dir / "summary.csv").exists()

    assert main(["verify", "--model", str(model_path), "--seed", "4"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out


def test_cli_train_reports_unwritable_output(tmp_path):
    rc = main(
        [
            "train",
            "--scenario",
            "uniform_square",
            "--n",
            "16",
            "--out",
            str(tmp_path / "missing_dir" / "model.json"),
        ]
    )
    assert rc == 2


def test_cli_train_needs_n_for_builtins(tmp_path, capsys):
    rc = main(["train", "--scenario", "uniform_square", "--out", str(tmp_path / "m.json")])
    assert rc == 1
    assert "--n" in capsys.readouterr().err


def test_cli_train_from_scenario_file(tmp_path):
    from simax import build_scenario, dumps_scenario

    spec_path = tmp_path / "scenario.json"
    spec_path.write_text(dumps_scenario(build_scenario("two_level", 8)), encoding="utf-8")
    rc = main(["train", "--scenario", str(spec_path), "--out", str(tmp_path / "m.json")])
    assert rc == 0
    assert load_model(tmp_path / "m.json").scenario.name == "two_level"


def test_cli_run_error_paths(tmp_path, capsys):
    assert main(["run", "--model", str(tmp_path / "nope.json"), "--out", str(tmp_path / "o.csv")]) == 1
    assert "error" in capsys.readouterr().err

    model_path = tmp_path / "model.json"
    main(["train", "--scenario", "uniform_square", "--n", "16", "--out", str(model_path)])
    rc = main(["run", "--model", str(model_path), "--trials", "0", "--out", str(tmp_path / "o.csv")])
    assert rc == 1
    assert "trials" in capsys.readouterr().err


def test_cli_timing_breaks_byte_reproducibility_knowingly(tmp_path):
    model_path = tmp_path / "model.json"
    main(["train", "--scenario", "uniform_square", "--n", "16", "--out", str(model_path)])
    out = tmp_path / "t.csv"
    assert main(["run", "--model", str(model_path), "--trials", "1", "--timing", "--out", str(out)]) == 0
    rows = read_rows_csv(out)
    assert all(r.wall_time_ns > 0 for r in rows)


def test_cli_report_rejects_garbage_csv(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("nope\n", encoding="utf-8")
    assert main(["report", "--in", str(bad), "--out", str(tmp_path / "r")]) == 1
    assert "unexpected header" in capsys.readouterr().err


def test_model_file_is_versioned_json(tmp_path):
    model_path = tmp_path / "model.json"
    main(["train", "--scenario", "uniform_square", "--n", "16", "--out", str(model_path)])
    obj = json.loads(model_path.read_text(encoding="utf-8"))
    assert obj["format"] == "simax-model"
    assert obj["version"] == 1
    assert obj["rng_algorithm"] == "pcg64"
    assert len(obj["trees"]) == 16
