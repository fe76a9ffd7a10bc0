import json

import pytest

from levdun.cli import main

SURVIVAL_ARGS = ["--response", "survival", "--group", "site", "--contrast", "grandmean", "--alternative", "two-sided"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_test_table_and_json(capsys, survival_csv):
    code, out, _ = run(capsys, "test", "--data", str(survival_csv), *SURVIVAL_ARGS, "--modified", "--seed", "1")
    assert code == 0 and "breast - mean" in out
    code, out, _ = run(capsys, "test", "--data", str(survival_csv), *SURVIVAL_ARGS, "--modified", "--seed", "1",
                       "--format", "json")
    d = json.loads(out)
    breast = next(r for r in d["rows"] if r["label"].startswith("breast"))
    assert breast["adj_p"] == pytest.approx(0.002, abs=0.005)
    assert d["spec"]["modified"] is True


def test_json_round_trips_table_numbers(capsys, survival_csv):
    args = ["test", "--data", str(survival_csv), *SURVIVAL_ARGS, "--seed", "4"]
    _, table, _ = run(capsys, *args)
    _, js, _ = run(capsys, *args, "--format", "json")
    rows = json.loads(js)["rows"]
    for row, line in zip(rows, table.splitlines()[2:]):
        cells = line.split()
        shown = [float(c) for c in cells[-6:]]
        stored = [row[k] for k in ("estimate", "stderr", "tstat", "adj_p", "ci_low", "ci_high")]
        for s, v in zip(shown, stored):
            assert float(f"{v:.4g}") == s


def test_unknown_control_exit_2(capsys, survival_csv):
    code, _, err = run(capsys, "test", "--data", str(survival_csv), "--control", "999")
    assert code == 2 and "unknown control label" in err


def test_missing_file_and_bad_flag(capsys, tmp_path):
    code, _, _ = run(capsys, "test", "--data", str(tmp_path / "nope.csv"))
    assert code == 2
    with pytest.raises(SystemExit) as info:
        main(["test", "--data", "x.csv", "--alternative", "up"])
    assert info.value.code == 2


def test_degenerate_data_exit_3(capsys, tmp_path):
    p = tmp_path / "c.csv"
    p.write_text("g,y\nA,1\nA,1\nB,2\nB,2\n")
    code, _, err = run(capsys, "test", "--data", str(p))
    assert code == 3 and "numerical" in err


def test_export_ci(capsys, tmp_path, survival_csv):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    base = ["export-ci", "--data", str(survival_csv), "--response", "survival", "--group", "site",
            "--control", "stomach", "--seed", "8"]
    assert main(base + ["--out", str(out1)]) == 0
    assert main(base + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    lines = out1.read_text().splitlines()
    assert lines[0] == "label,estimate,lower,upper" and len(lines) == 5
    assert all(line.endswith(",inf") for line in lines[1:])

    assert main(base + ["--alternative", "two-sided", "--out", str(out1)]) == 0
    for line in out1.read_text().splitlines()[1:]:
        assert "inf" not in line

    _, table, _ = run(capsys, "test", *base[1:], "--format", "csv")
    assert main(base + ["--out", str(out2)]) == 0
    assert table == out2.read_text()

    assert main(base + ["--out", str(tmp_path / "missing" / "x.csv")]) == 2


def test_simulate_inline_and_determinism(capsys):
    args = ["simulate", "--n", "6,6,6", "--sd", "1,2,1", "--reps", "300", "--seed", "5"]
    code, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args, "--workers", "3")
    assert code == 0 and a == b
    assert len(a.splitlines()) == 2
    _, js, _ = run(capsys, *args, "--format", "json")
    assert json.loads(js)[0]["replications_used"] == 300


def test_simulate_seed_from_env(capsys, monkeypatch):
    monkeypatch.setenv("LEVDUN_SEED", "77")
    args = ["simulate", "--n", "5,5", "--reps", "200", "--format", "json"]
    _, a, _ = run(capsys, *args)
    assert json.loads(a)[0]["seed"] == 77
    _, b, _ = run(capsys, *args, "--seed", "77")
    assert a == b


def test_simulate_validation(capsys, tmp_path):
    assert run(capsys, "simulate", "--n", "3,3", "--reps", "0")[0] == 2
    assert run(capsys, "simulate")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "simulate", "--scenario", str(bad))[0] == 2


def test_simulate_scenario_file(capsys, tmp_path):
    p = tmp_path / "s.json"
    p.write_text(json.dumps([{"group_sizes": [4, 4, 4], "group_sds": [1, 1, 1], "replications": 40},
                             {"group_sizes": [4, 4, 4], "group_sds": [1, 3, 1], "replications": 40}]))
    code, out, _ = run(capsys, "simulate", "--scenario", str(p))
    assert code == 0 and len(out.splitlines()) == 3
