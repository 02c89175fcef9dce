import json
import os
import sys

import pytest
from click.testing import CliRunner

sys.path.append("../")

import run_abelquot
from abelquot.errors import InputError
from abelquot.run_report import Verdict

from . import group_file


@pytest.fixture
def runner():
    return CliRunner()


def test_verify_file(runner, group_file):
    result = runner.invoke(
        run_abelquot.cli, ["verify", "--file", group_file("d4.grp")]
    )
    assert result.exit_code == 0
    assert "[pass] D4" in result.output
    assert "|G_ab|=4" in result.output
    assert "fail: 0" in result.output


def test_verify_intransitive(runner, group_file):
    result = runner.invoke(
        run_abelquot.cli, ["verify", "--file", group_file("intransitive.grp")]
    )
    assert result.exit_code == 2
    assert "not transitive" in result.output


def test_verify_enumerate(runner):
    result = runner.invoke(run_abelquot.cli, ["verify", "--enumerate", "2..4"])
    assert result.exit_code == 0
    assert "pass: 8, fail: 0, indeterminate: 0" in result.output


def test_verify_cross_check(runner):
    result = runner.invoke(
        run_abelquot.cli, ["verify", "--enumerate", "3..6", "--cross-check"]
    )
    assert result.exit_code == 0
    assert "[pass] cross-check degree 4  5 classes" in result.output
    assert "cross-check degree 6" not in result.output
    result = runner.invoke(
        run_abelquot.cli, ["verify", "--fixtures", "4..4", "--cross-check"]
    )
    assert result.exit_code == 2


def test_verify_deterministic(runner, group_file):
    args = ["verify", "--fixtures", "6..6", "--file", group_file("s5.grp")]
    first = runner.invoke(run_abelquot.cli, args)
    second = runner.invoke(run_abelquot.cli, args)
    assert first.exit_code == 0
    assert first.output == second.output
    assert "wall time" not in first.output
    timed = runner.invoke(run_abelquot.cli, args[:1] + ["--timing"] + args[1:])
    assert "wall time" in timed.output


def test_bad_range(runner):
    result = runner.invoke(run_abelquot.cli, ["verify", "--enumerate", "5..x"])
    assert result.exit_code == 2
    result = runner.invoke(run_abelquot.cli, ["verify"])
    assert result.exit_code == 2


def test_run_verify(group_file, tmp_path):
    csv_path = str(tmp_path / "verify.csv")
    report = run_abelquot.run_verify(
        fixture_range="9..9",
        files=[group_file("c3wrc3.grp")],
        csv_path=csv_path,
    )
    assert report.exit_code == 0
    assert report.count(Verdict.FAIL) == 0
    assert report.items[-1].item == "C3 wr C3"
    assert os.path.isfile(csv_path)
    with pytest.raises(InputError):
        run_abelquot.run_verify(files=[str(tmp_path / "missing.grp")])


def test_parse_range():
    assert run_abelquot.parse_range("2..7") == (2, 7)
    assert run_abelquot.parse_range("5") == (5, 5)
    with pytest.raises(InputError):
        run_abelquot.parse_range("7..2")


def test_certify(runner, group_file, tmp_path):
    json_path = str(tmp_path / "c3wrc3.json")
    result = runner.invoke(
        run_abelquot.cli,
        [
            "certify",
            "--file",
            group_file("c3wrc3.grp"),
            "--json",
            json_path,
            "--recheck",
        ],
    )
    assert result.exit_code == 0
    assert "[pass] recheck" in result.output
    assert "imprimitive-step r=3 d=3" in result.output
    with open(json_path) as f:
        document = json.load(f)
    assert document["root"]["child"]["kind"] == "primitive-base"


def test_certify_primitive(group_file):
    report = run_abelquot.run_certify(group_file("s5.grp"), recheck=True)
    assert report.exit_code == 0
    assert len(report.notes) == 1
    assert "primitive-base" in report.notes[0]


def test_constants(runner):
    result = runner.invoke(run_abelquot.cli, ["constants"])
    assert result.exit_code == 0
    assert "[pass] threshold  20603" in result.output
    assert "c0: [2.2439" in result.output


def test_sweep(runner, tmp_path):
    csv_path = str(tmp_path / "sweep.csv")
    result = runner.invoke(
        run_abelquot.cli,
        ["sweep", "--nmax", "21000", "--jobs", "2", "--csv", csv_path],
    )
    assert result.exit_code == 0
    assert "0 violations" in result.output
    assert os.path.isfile(csv_path)


def test_sweep_below_threshold(runner):
    result = runner.invoke(run_abelquot.cli, ["sweep", "--nmax", "20000"])
    assert result.exit_code == 2


def test_export_catalog(runner, tmp_path):
    out = str(tmp_path / "catalogs")
    result = runner.invoke(
        run_abelquot.cli,
        ["export-catalog", "--degree", "3..4", "--out", out],
    )
    assert result.exit_code == 0
    assert "[pass] degree 4  5 groups" in result.output
    assert os.path.isfile(os.path.join(out, "degree-4", "index.csv"))

    report = run_abelquot.run_export_catalog(
        "10..10", str(tmp_path / "fixtures"), use_fixtures=True
    )
    assert report.exit_code == 0
