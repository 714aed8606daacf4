"""Tests for the command-line interface."""

import json

import pytest
from click.testing import CliRunner

from extlin.cli import main
from extlin.core.fingrpd import delooping
from extlin.core.groups import symmetric
from extlin.core.serialization import dump_groupoid


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def write(tmp_path):
    def _write(name, data):
        path = tmp_path / name
        path.write_text(data if isinstance(data, str) else json.dumps(data), encoding="utf-8")
        return str(path)

    return _write


@pytest.fixture
def bs3():
    return dump_groupoid(delooping(symmetric(3)))


class TestCheck:
    """Tests for extlin check."""

    def test_unknown_suite(self, runner):
        result = runner.invoke(main, ["check", "--suite", "nosuch"])
        assert result.exit_code == 2
        assert "nosuch" in result.output

    def test_zero_cases(self, runner):
        result = runner.invoke(main, ["check", "--suite", "distributivity", "--cases", "0"])
        assert result.exit_code == 0
        assert "0 cases" in result.output
        assert "all 1 suites passed" in result.output

    def test_json_report(self, runner):
        result = runner.invoke(main, ["check", "-s", "quotient_iso", "-n", "2", "--format", "json"])
        assert result.exit_code == 0
        report = json.loads(result.output)
        assert report["suite"] == "quotient_iso"
        assert report["failures"] == []

    def test_seed_from_environment(self, runner):
        result = runner.invoke(
            main, ["check", "-s", "quantum_laws", "-n", "1", "--format", "json"], env={"EXTLIN_SEED": "9"}
        )
        assert json.loads(result.output)["seed"] == 9

    def test_mutation_fails_the_run(self, runner):
        result = runner.invoke(main, ["check", "-s", "chain_model", "-n", "2", "--mutation", "koszul-sign"])
        assert result.exit_code == 1
        assert "FAIL" in result.output

    def test_negative_cases_rejected(self, runner):
        result = runner.invoke(main, ["check", "--cases", "-1"])
        assert result.exit_code == 2


class TestDemo:
    """Tests for extlin demo."""

    def test_text(self, runner):
        result = runner.invoke(main, ["demo", "--name", "qubit"])
        assert result.exit_code == 0
        assert "3/5" in result.output

    def test_json(self, runner):
        result = runner.invoke(main, ["demo", "--name", "qubit", "--format", "json"])
        assert result.exit_code == 0
        report = json.loads(result.output)
        assert report["verified"] is True
        assert report["readouts"]["1"] == "0+4/5i"

    def test_unknown_demo(self, runner):
        result = runner.invoke(main, ["demo", "--name", "nosuch"])
        assert result.exit_code == 2


class TestValidate:
    """Tests for extlin validate."""

    def test_valid_groupoid(self, runner, write, bs3):
        result = runner.invoke(main, ["validate", "--input", write("bs3.json", bs3)])
        assert result.exit_code == 0
        assert "valid groupoid" in result.output

    def test_corrupted_table(self, runner, write, bs3):
        identity = bs3["identities"]["*"]
        for entry in bs3["compose"]:
            if identity not in entry[:2] and entry[2] != identity:
                entry[2] = identity
                break
        result = runner.invoke(main, ["validate", "-i", write("bad.json", bs3)])
        assert result.exit_code == 1
        assert "GroupoidLawError" in result.output

    def test_square_zero_violation(self, runner, write):
        doc = {
            "components": {"0": {"dim": 1}, "1": {"dim": 1}, "2": {"dim": 1}},
            "differentials": {"1": [["1"]], "2": [["1"]]},
        }
        result = runner.invoke(main, ["validate", "-i", write("cc.json", doc)])
        assert result.exit_code == 1
        assert "differential" in result.output

    def test_malformed_document(self, runner, write):
        result = runner.invoke(main, ["validate", "-i", write("bad.json", {"discrete": ["0"], "colour": 1})])
        assert result.exit_code == 2

    def test_not_json(self, runner, write):
        result = runner.invoke(main, ["validate", "-i", write("bad.json", "{not json")])
        assert result.exit_code == 2


class TestCompute:
    """Tests for extlin compute."""

    def test_homology(self, runner, write):
        path = write("sphere.json", {"components": {"2": {"dim": 1}}})
        result = runner.invoke(main, ["compute", "--op", "homology", "--input", path])
        assert result.exit_code == 0
        assert json.loads(result.output) == {"2": 1}

    def test_output_file(self, runner, write, tmp_path):
        path = write("sphere.json", {"components": {"0": {"dim": 2}}})
        out = tmp_path / "out.json"
        result = runner.invoke(main, ["compute", "-o", "homology", "-i", path, "--output", str(out)])
        assert result.exit_code == 0
        assert json.loads(out.read_text(encoding="utf-8")) == {"0": 2}

    def test_wrong_document(self, runner, write):
        path = write("pair.json", {"left": {"components": {}}})
        result = runner.invoke(main, ["compute", "--op", "exttensor", "--input", path])
        assert result.exit_code == 2
        assert "Error" in result.output
