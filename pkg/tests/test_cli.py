from __future__ import annotations

import json
import math

import pytest

from twistsurvey import cli


def run(argv):
    return cli.main(argv)


def test_expand_golden_rows(tmp_path):
    out = tmp_path / "an.csv"
    assert run(["expand", "--curve", "11a1", "--bound", "3", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "# schema_version 1"
    assert lines[1] == "n,a_n"
    assert lines[2:] == ["1,2", "2,0", "3,-2"]


def test_expand_deterministic_across_thread_flags(tmp_path):
    one = tmp_path / "one.csv"
    four = tmp_path / "four.csv"
    run(["expand", "--curve", "17a1", "--bound", "50000", "--out", str(one),
         "--threads", "1"])
    run(["expand", "--curve", "17a1", "--bound", "50000", "--out", str(four),
         "--threads", "4"])
    assert one.read_bytes() == four.read_bytes()


@pytest.fixture(scope="module")
def survey_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("survey")
    code = run([
        "survey", "--curve", "17a1", "--bound", "150000",
        "--classes", "3,7", "--out", str(out),
    ])
    assert code == 0
    return out


def test_survey_class_csv_schema(survey_dir):
    lines = (survey_dir / "17a1_class3.csv").read_text().splitlines()
    assert lines[0] == "# schema_version 1"
    assert lines[1] == "# curve 17a1"
    assert lines[2] == "# n0 3"
    assert lines[3] == "# bound 150000"
    assert lines[4] == "n,a_n,k,selmer,L"
    rows = [line.split(",") for line in lines[5:]]
    assert len(rows) > 1000
    prev = 0
    for n, a, k, selmer, l in rows:
        n, a, k, selmer = int(n), int(a), int(k), int(selmer)
        assert n > prev and n % 68 == 3
        prev = n
        if a == 0:
            assert k == 0 and selmer == 0 and l == ""
        else:
            assert selmer == 2 * k
            r = math.isqrt(k)
            assert r * r == k
            assert float(l) > 0


def test_survey_summary_schema(survey_dir):
    doc = json.loads((survey_dir / "17a1_summary.json").read_text())
    assert doc["schema_version"] == 1
    assert doc["curve"] == "17a1"
    assert doc["bound"] == 150000
    assert doc["checkpoint_step"] == 50000
    assert set(doc["classes"]) == {"3", "7"}
    cls = doc["classes"]["3"]
    assert cls["n0_effective"] == 3
    assert cls["members"] > 1000
    assert set(cls["fits"]) == set(cls["table_rows"])
    assert "0" in cls["fits"] and "1" in cls["fits"]
    fit1 = cls["fits"]["1"]
    assert 0 < fit1["alpha"] < 1
    assert abs(fit1["epsilon"]) <= 0.02
    assert not fit1["degenerate"]
    rows = cls["table_rows"]["1"]
    assert [r[0] for r in rows] == [100000]
    m, x, ratio, model = rows[0]
    assert 0 < ratio < 1 and 0 < model < 1


def test_fit_command_roundtrip(survey_dir, capsys):
    code = run([
        "fit", "--survey-csv", str(survey_dir / "17a1_class3.csv"), "--k", "1",
    ])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["curve"] == "17a1" and doc["n0"] == 3 and doc["k"] == 1
    assert 0 < doc["alpha"] < 1
    assert doc["schema_version"] == 1


def test_plot_data_columns(tmp_path):
    out = tmp_path / "pd.dat"
    code = run([
        "plot-data", "--curve", "17a1", "--n0", "3", "--k", "1",
        "--bound", "150000", "--out", str(out),
    ])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[4] == "x ratio sigma"
    data = [line.split() for line in lines[5:]]
    assert len(data) == 3  # checkpoints at 50000, 100000, 150000
    for x, ratio, model in data:
        assert int(x) >= 16
        assert 0 < float(ratio) < 1
        assert 0 < float(model) < 1


def test_plot_data_empty_combination(tmp_path):
    # k = 2 is not a square, so no member ever lands there
    out = tmp_path / "empty.dat"
    code = run([
        "plot-data", "--curve", "17a1", "--n0", "3", "--k", "2",
        "--bound", "100000", "--out", str(out),
    ])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[-1] == "x ratio sigma"


def test_tables_smoke(capsys):
    code = run([
        "tables", "--curve", "17a1", "--bound", "150000", "--classes", "3",
    ])
    assert code == 0
    text = capsys.readouterr().out
    assert "fitted alpha by class and k" in text
    assert "17a1 n0=3 k=1" in text
    assert "ratio" in text and "sigma" in text


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "survey.cfg"
    cfg.write_text(
        "curve = 17a1\nbound = 100000\nclasses = 3\n"
        "# comment\ncheckpoint_step = 50000\n"
    )
    out = tmp_path / "out"
    code = run([
        "survey", "--config", str(cfg), "--bound", "150000", "--out", str(out),
    ])
    assert code == 0
    doc = json.loads((out / "17a1_summary.json").read_text())
    assert doc["bound"] == 150000  # flag beats config file
    assert set(doc["classes"]) == {"3"}


def test_unknown_config_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("curve = 17a1\nrank = 2\n")
    assert run(["survey", "--config", str(cfg)]) == 2


def test_exit_codes_config_errors(tmp_path):
    assert run(["expand", "--curve", "37a1", "--bound", "10",
                "--out", str(tmp_path / "x.csv")]) == 2
    assert run(["survey", "--curve", "17a1", "--bound", "100000",
                "--classes", "4", "--out", str(tmp_path)]) == 2
    assert run(["survey", "--bound", "100000"]) == 2  # curve is required
    assert run(["nonsense"]) == 2


def test_survey_aborts_on_forged_baseline(tmp_path):
    ov = tmp_path / "forged.cfg"
    ov.write_text("17a1.3.selmer_n0 = 6\n")
    code = run([
        "survey", "--curve", "17a1", "--bound", "100000", "--classes", "3",
        "--out", str(tmp_path), "--overrides", str(ov),
    ])
    assert code == 4


def test_verify_quick_clean(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = run(["verify", "--curve", "17a1", "--depth", "quick",
                "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["passed"] is True
    assert doc["depth"] == "quick"
    names = {s["name"] for s in doc["suites"]}
    assert "theta_reference" in names
    assert "cassels" in names
    assert "baseline_reproduction" in names
    assert all(s["passed"] for s in doc["suites"])


def test_verify_catches_square_consistent_forgery(tmp_path):
    # k0 = 4 keeps every transferred order a perfect square, so only the
    # from-scratch baseline re-derivation can notice
    ov = tmp_path / "forged.cfg"
    ov.write_text("17a1.3.selmer_n0 = 8\n17a1.3.k0 = 4\n")
    out = tmp_path / "report.json"
    code = run(["verify", "--curve", "17a1", "--depth", "quick",
                "--overrides", str(ov), "--out", str(out)])
    assert code == 3
    doc = json.loads(out.read_text())
    assert doc["passed"] is False
    bad = {s["name"]: s for s in doc["suites"]}["baseline_reproduction"]
    assert not bad["passed"]
    assert bad["failures"]
