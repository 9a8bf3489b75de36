import json

import pytest

from convfactor.cli import main
from convfactor.experiments import scenario_by_name
from convfactor.serialize import scenario_to_record


def run(*argv):
    return main(list(argv))


class TestBound:
    def test_writes_csv_and_manifest(self, tmp_path):
        out = tmp_path / "run"
        assert run("bound", "--scenario", "two_equal_disks", "--out", str(out)) == 0
        lines = (out / "bound.csv").read_text().splitlines()
        assert lines[0].startswith("scenario,lower_bound")
        assert lines[1].startswith("two_equal_disks,0.333333333333")
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["command"] == "bound"
        assert "input_hash" in manifest

    def test_scenario_file_input(self, tmp_path):
        sfile = tmp_path / "s.json"
        sfile.write_text(json.dumps(scenario_to_record(
            scenario_by_name("disk_point"))))
        out = tmp_path / "run"
        assert run("bound", "--scenario-file", str(sfile),
                   "--out", str(out)) == 0
        assert "disk_point,0.5" in (out / "bound.csv").read_text()


class TestExitCodes:
    def test_unknown_scenario_is_config_error(self, tmp_path):
        code = run("bound", "--scenario", "nope", "--out", str(tmp_path))
        assert code == 2

    def test_missing_scenario_is_config_error(self, tmp_path):
        code = run("bound", "--out", str(tmp_path))
        assert code == 2

    def test_malformed_file_is_config_error(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{ not json")
        code = run("bound", "--scenario-file", str(bad), "--out", str(tmp_path))
        assert code == 2

    def test_numerical_failure_exit_code(self, tmp_path):
        # a curve margin large enough to collide the offset curves
        code = run("approx", "--scenario", "two_equal_disks",
                   "--margin", "1.5", "--out", str(tmp_path))
        assert code == 3


class TestProp16:
    def test_table_and_plot(self, tmp_path):
        out = tmp_path / "p16"
        assert run("prop16", "--h0", "2", "--out", str(out)) == 0
        lines = (out / "prop16.csv").read_text().splitlines()
        assert lines[0] == "k,theta,limit"
        assert len(lines) == 9
        assert (out / "prop16.svg").exists()


class TestProp15:
    def test_reference_case(self, tmp_path):
        out = tmp_path / "p15"
        assert run("prop15", "--h0", "2", "--delta0", "0.3",
                   "--out", str(out)) == 0
        text = (out / "prop15.csv").read_text()
        assert ",pass" in text


class TestGateAndReport:
    def test_single_scenario_gate(self, tmp_path):
        out = tmp_path / "gate"
        assert run("gate", "--scenario", "disk_point", "--out", str(out)) == 0
        text = (out / "gate.csv").read_text()
        assert "disk_point" in text and ",pass" in text

    def test_gate_csv_deterministic(self, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert run("gate", "--scenario", "disk_point", "--out", str(out1)) == 0
        assert run("gate", "--scenario", "disk_point", "--out", str(out2)) == 0
        assert (out1 / "gate.csv").read_bytes() == (out2 / "gate.csv").read_bytes()

    def test_report_aggregates(self, tmp_path):
        out = tmp_path / "gate"
        run("gate", "--scenario", "disk_point", "--out", str(out))
        assert run("report", str(tmp_path)) == 0
        summary = (tmp_path / "summary.csv").read_text()
        assert "disk_point" in summary

    def test_report_warns_on_empty(self, tmp_path, capsys):
        assert run("report", str(tmp_path / "empty")) == 0
        assert "warning" in capsys.readouterr().err


class TestRho:
    def test_outputs(self, tmp_path):
        out = tmp_path / "rho"
        assert run("rho", "--scenario", "two_equal_disks", "--out", str(out),
                   "--degree-max", "20", "--window", "8", "18") == 0
        rho_line = (out / "rho.csv").read_text().splitlines()[1]
        value = float(rho_line.split(",")[1])
        assert 0.8 < value < 1.0
        assert (out / "dn.csv").exists()
        assert (out / "dn.svg").exists()
