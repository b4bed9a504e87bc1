import csv
import io
import json

import pytest

from fuzzfolio.cli import main
from fuzzfolio.errors import BudgetInfeasibleError, ValidationError
from fuzzfolio.io import bundled_instance, bundled_names, load_instance, write_instance
from fuzzfolio.report import CSV_COLUMNS


def run_cli(args, capsys):
    try:
        code = main(args)
    except SystemExit as exc:  # argparse rejects bad flags with exit code 2
        code = exc.code
    out = capsys.readouterr()
    return code, out.out, out.err


def parse_csv(text):
    rows = list(csv.DictReader(io.StringIO(text)))
    return rows


# --- instance files -----------------------------------------------------------

def test_bundled_fixture_matches_published_parameters():
    inst = bundled_instance("paper_table1")
    assert inst.n_assets == 5
    assert inst.total_fund == 200.0
    assert inst.upper_bounds == (60.0,) * 5
    assert [a.r0 for a in inst.assets] == [1.3, 1.2, 1.35, 1.4, 1.45]
    assert [a.r1 for a in inst.assets] == [1.45, 1.25, 1.4, 1.5, 1.6]
    assert [a.r2 for a in inst.assets] == [0.6, 0.5, 0.5, 0.6, 0.6]
    assert [a.beta for a in inst.assets] == [0.2, 0.15, 0.15, 0.25, 0.25]
    assert [a.gamma for a in inst.assets] == [0.2, 0.15, 0.15, 0.25, 0.25]
    assert (inst.target.r0, inst.target.r2, inst.target.beta) == (250.0, 50.0, 40.0)
    assert (inst.factor.mean, inst.factor.std_dev) == (0.0, 1.0)
    assert "paper_table1" in bundled_names()


def test_round_trip(tmp_path):
    inst = bundled_instance("paper_table1")
    out = tmp_path / "copy.json"
    write_instance(inst, out)
    assert load_instance(out) == inst


def test_load_rejects_negative_spread(tmp_path):
    bad = tmp_path / "bad.json"
    src = tmp_path / "src.json"
    write_instance(bundled_instance("paper_table1"), src)
    data = json.loads(src.read_text())
    data["assets"][2]["beta"] = -1.0
    bad.write_text(json.dumps(data))
    with pytest.raises(ValidationError) as err:
        load_instance(bad)
    assert "assets[2]" in str(err.value)


def test_load_rejects_budget_infeasible(tmp_path):
    src = tmp_path / "src.json"
    write_instance(bundled_instance("paper_table1"), src)
    data = json.loads(src.read_text())
    data["total_fund"] = 400.0
    data["upper_bounds"] = [60.0] * 5
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    with pytest.raises(BudgetInfeasibleError):
        load_instance(bad)


def test_load_reports_parse_location(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "assets": [,]\n}\n')
    with pytest.raises(ValidationError) as err:
        load_instance(bad)
    assert ":2:" in str(err.value)


def test_load_missing_field(tmp_path):
    src = tmp_path / "src.json"
    write_instance(bundled_instance("paper_table1"), src)
    data = json.loads(src.read_text())
    del data["assets"][0]["gamma"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    with pytest.raises(ValidationError) as err:
        load_instance(bad)
    assert "gamma" in str(err.value) and "assets[0]" in str(err.value)


# --- solve command ---------------------------------------------------------------

def test_solve_exact_csv(capsys):
    code, out, _ = run_cli(["solve", "--levels", "0.1", "--format", "csv"], capsys)
    assert code == 0
    rows = parse_csv(out)
    assert len(rows) == 1
    row = rows[0]
    assert tuple(row) == CSV_COLUMNS
    assert row["solver"] == "exact"
    assert row["allocation"] == "60;0;20;60;60"
    assert row["threshold_ok"] == "true"
    assert float(row["objective"]) == pytest.approx(422.723, abs=1e-3)


def test_solve_flags_unsatisfiable_threshold(capsys):
    code, out, _ = run_cli(["solve", "--levels", "0.7", "--format", "csv"], capsys)
    assert code == 0
    row = parse_csv(out)[0]
    assert row["threshold_ok"] == "false"
    assert row["status"] == "threshold_infeasible"


def test_enforce_threshold_exit_code(capsys):
    code, _, err = run_cli(
        ["solve", "--levels", "0.7", "--format", "csv", "--enforce-threshold"], capsys)
    assert code == 4
    assert "unsatisfiable" in err

    code, _, _ = run_cli(
        ["solve", "--levels", "0.1", "--format", "csv", "--enforce-threshold"], capsys)
    assert code == 0


def test_solve_ica_rows_carry_oracle_gap(capsys):
    code, out, _ = run_cli(
        ["solve", "--levels", "0.1", "--solver", "ica", "--seeds", "1..3", "--format", "csv"],
        capsys)
    assert code == 0
    rows = parse_csv(out)
    assert [r["seed"] for r in rows] == ["1", "2", "3"]
    for r in rows:
        oracle = float(r["oracle_objective"])
        assert oracle == pytest.approx(422.723, abs=1e-3)
        assert float(r["objective"]) <= oracle + 1e-9
        assert float(r["rel_gap"]) >= -1e-12
        assert abs(float(r["budget_residual"])) <= 1e-6


def test_solve_decoupled_levels(capsys):
    code, out, _ = run_cli(
        ["solve", "--lambda", "0.2", "--eta", "0.6", "--format", "csv"], capsys)
    assert code == 0
    row = parse_csv(out)[0]
    assert (row["lambda"], row["eta"]) == ("0.2", "0.6")


def test_level_flag_conflicts(capsys):
    code, _, err = run_cli(["solve", "--lambda", "0.2"], capsys)
    assert code == 2 and "--eta" in err
    code, _, _ = run_cli(["solve", "--levels", "0.1", "--lambda", "0.2", "--eta", "0.3"], capsys)
    assert code == 2


def test_unknown_instance_exit_code(capsys):
    code, _, err = run_cli(["solve", "--instance", "nope.json"], capsys)
    assert code == 2
    assert "nope.json" in err


def test_budget_infeasible_instance_exit_code(tmp_path, capsys):
    src = tmp_path / "inst.json"
    write_instance(bundled_instance("paper_table1"), src)
    data = json.loads(src.read_text())
    data["total_fund"] = 400.0
    src.write_text(json.dumps(data))
    code, _, err = run_cli(["solve", "--instance", str(src)], capsys)
    assert code == 3


def test_default_levels_and_table_format(capsys):
    code, out, _ = run_cli(["solve"], capsys)
    assert code == 0
    for level in ("0.1", "0.4", "0.7", "0.9"):
        assert f"lambda={level}" in out
    assert "exact" in out


def test_json_format(capsys):
    code, out, _ = run_cli(["solve", "--levels", "0.4", "--format", "json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["instance"] == "bundled:paper_table1"
    assert doc["rows"][0]["allocation"] == [20.0, 0.0, 60.0, 60.0, 60.0]


def test_ica_tuning_flags(capsys):
    code, out, _ = run_cli(
        ["solve", "--levels", "0.4", "--solver", "ica", "--seeds", "1",
         "--iters", "5", "--countries", "30", "--imperialists", "3",
         "--revolution", "0.4", "--epsilon", "0.02", "--eq-factor", "2.0",
         "--format", "csv"], capsys)
    assert code == 0
    row = parse_csv(out)[0]
    assert float(row["objective"]) <= float(row["oracle_objective"]) + 1e-9


def test_seed_range_forms(capsys):
    code, out, _ = run_cli(
        ["solve", "--levels", "0.4", "--solver", "ica", "--seeds", "2,5..7", "--format", "csv"],
        capsys)
    assert code == 0
    assert [r["seed"] for r in parse_csv(out)] == ["2", "5", "6", "7"]
    code, _, _ = run_cli(["solve", "--seeds", "bogus"], capsys)
    assert code == 2


# --- reproduce-paper ---------------------------------------------------------------

def test_reproduce_rows_and_published_comparison(capsys):
    code, out, _ = run_cli(["reproduce-paper", "--seeds", "3", "--format", "csv"], capsys)
    assert code == 0
    rows = parse_csv(out)
    exact = [r for r in rows if r["solver"] == "exact"]
    heur = [r for r in rows if r["solver"] == "ica"]
    assert len(exact) == 4 and len(heur) == 4
    expected_alloc = {
        "0.1": "60;0;20;60;60",
        "0.4": "20;0;60;60;60",
        "0.7": "20;0;60;60;60",
        "0.9": "0;60;60;20;60",
    }
    expected_flags = {"0.1": "true", "0.4": "true", "0.7": "false", "0.9": "false"}
    for r in exact:
        assert r["allocation"] == expected_alloc[r["lambda"]]
        assert r["threshold_ok"] == expected_flags[r["lambda"]]
        published = float(r["published_objective"])
        assert abs(float(r["objective"]) - published) / published < 0.005
        assert abs(float(r["published_gap"])) < 0.005


def test_reproduce_table_shows_deviation(capsys):
    code, out, _ = run_cli(["reproduce-paper", "--seeds", "1"], capsys)
    assert code == 0
    assert "published" in out
    assert "deviation" in out


def test_output_file_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        code, out, _ = run_cli(
            ["solve", "--levels", "0.1,0.9", "--solver", "ica", "--seeds", "1..2",
             "--format", "csv", "--out", str(path)], capsys)
        assert code == 0
        assert out == ""
    assert a.read_bytes() == b.read_bytes()
