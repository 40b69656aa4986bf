"""Command-line entry points, exercised in-process through main()."""

import json

import pytest

from fermiqec import __version__
from fermiqec.cli import main


def test_verify_single_suite_text(capsys):
    assert main(["verify", "--suite", "reference", "--seed", "4"]) == 0
    out = capsys.readouterr().out
    assert "checks passed" in out
    assert "FAIL" not in out


def test_verify_json_record(capsys):
    assert main(["verify", "--suite", "codes", "--json"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["command"] == "verify"
    assert record["version"] == __version__
    assert record["seed"] == 0
    assert record["suites"] == ["codes"]
    assert record["passed"] is True
    assert all(
        set(c) == {"name", "passed", "detail"} and c["passed"]
        for c in record["checks"]
    )


def test_verify_rejects_unknown_suite(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--suite", "nonsense"])
    assert exc.value.code == 2


def test_syndrome_table_text(capsys):
    assert main(["syndrome-table"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "s12  s23  correction"
    assert " +1   +1  none" in out
    assert any("pi phase on block mode 1" in line for line in out)
    assert out[-1] == "brute-forced table matches"


def test_syndrome_table_json(capsys):
    assert main(["syndrome-table", "--json"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["command"] == "syndrome-table"
    assert record["matches_generated"] is True
    assert len(record["table"]) == 4
    offsets = {
        (row["s12"], row["s23"]): row["mode_offset"] for row in record["table"]
    }
    assert offsets[(1, 1)] is None
    assert offsets[(-1, 1)] == 0
    assert offsets[(-1, -1)] == 1
    assert offsets[(1, -1)] == 2


def test_exchange_rejects_bad_probability_lists(capsys):
    for bad in ("1.5", "abc", "0.1,,0.2"):
        with pytest.raises(SystemExit) as exc:
            main(["exchange", "--p", bad, "--shots", "1"])
        assert exc.value.code == 2


def test_exchange_writes_csv_and_json(tmp_path, capsys):
    csv_path = tmp_path / "points.csv"
    json_path = tmp_path / "run.json"
    code = main(
        [
            "exchange",
            "--p", "0",
            "--shots", "3",
            "--layers", "1",
            "--seed", "8",
            "--out", str(csv_path),
            "--json", str(json_path),
        ]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "p=0  estimate=-1.000000" in out
    assert "(shots=3, corrected)" in out

    lines = csv_path.read_text().splitlines()
    assert lines[0] == "p,shots,layers,corrected,estimate,ci_lo,ci_hi,seed"
    assert lines[1].startswith("0.0,3,1,true,-1.0,")
    assert lines[1].endswith(",8")

    record = json.loads(json_path.read_text())
    assert record["command"] == "exchange"
    assert record["version"] == __version__
    assert record["config"]["p_values"] == [0.0]
    assert record["config"]["confidence"] == 0.99
    assert record["results"][0]["estimate"] == -1.0
    assert record["results"][0]["count_minus"] == 0


def test_exchange_uncorrected_label(capsys):
    assert main(["exchange", "--p", "0", "--shots", "2", "--no-correct"]) == 0
    assert "uncorrected" in capsys.readouterr().out


def test_runtime_value_errors_exit_cleanly(capsys):
    code = main(["exchange", "--p", "0", "--shots", "1", "--confidence", "1.5"])
    assert code == 2
    assert capsys.readouterr().err.startswith("error:")