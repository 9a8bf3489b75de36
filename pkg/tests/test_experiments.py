import math

import pytest

from convfactor.errors import ParameterInfeasibleError
from convfactor.experiments import (
    Prop15Parameters,
    gate_theorem,
    parameter_checks,
    prop15_compact_set,
    prop15_scenario,
    prop16_limit,
    scenario_by_name,
    scenario_library,
)


class TestScenarioLibrary:
    def test_at_least_six_scenarios(self):
        assert len(scenario_library()) >= 6

    def test_names_are_unique(self):
        names = [s.name for s in scenario_library()]
        assert len(set(names)) == len(names)

    def test_each_has_two_targets(self):
        for s in scenario_library():
            assert s.F_alt is not None
            reprs = {
                tuple(tuple(complex(c) for c in piece) for piece in F.coefficients)
                for F in (s.F, s.F_alt)
            }
            assert len(reprs) == 2

    def test_lookup_by_name(self):
        s = scenario_by_name("two_equal_disks")
        assert s.name == "two_equal_disks"
        with pytest.raises(KeyError):
            scenario_by_name("nope")


class TestTwoDiskConstruction:
    def test_reference_case_passes(self):
        report = prop15_scenario(2.0, 0.3)
        assert report.passed
        assert report.final_value < report.target == pytest.approx(0.8)

    def test_all_inequalities_echoed(self):
        report = prop15_scenario(2.0, 0.3)
        names = [name for name, *_ in report.checks]
        assert "N0_target" in names and "final_bound" in names
        assert all(ok for _, ok, *_ in report.checks)

    def test_infeasible_delta_rejected(self):
        with pytest.raises(ParameterInfeasibleError):
            prop15_scenario(2.0, 0.6)  # delta0 must stay below 1 - 1/h0

    def test_bad_parameters_rejected_at_construction(self):
        with pytest.raises(ParameterInfeasibleError):
            Prop15Parameters(2.0, 0.3, 1.625, 0.1875, 1, 1e-12, 3)  # N0 too small

    def test_constructed_set_is_valid(self):
        report = prop15_scenario(2.0, 0.3)
        L = prop15_compact_set(report.params)
        assert len(L.components) == 2
        assert L.components[1].radius == report.params.eps0

    def test_checks_report_numbers(self):
        report = prop15_scenario(2.0, 0.3)
        for name, ok, lhs, rhs in parameter_checks(report.params):
            assert math.isfinite(lhs) and math.isfinite(rhs)

    @pytest.mark.parametrize("h0, delta0", [(2.0, 0.3), (3.0, 0.2), (1.5, 0.25)])
    def test_final_value_beats_target(self, h0, delta0):
        report = prop15_scenario(h0, delta0)
        assert report.passed
        assert report.final_value < delta0 + 1 / h0


class TestDiskPointLimit:
    def test_reference_values(self):
        rows = prop16_limit(2.0, 8)
        # closed form: theta_k = 1 / (h0 - 2^-k)
        for k, theta in rows:
            assert theta == pytest.approx(1 / (2.0 - 2.0 ** -k), rel=1e-9)

    def test_decreases_to_limit_from_above(self):
        rows = prop16_limit(2.0, 8)
        thetas = [t for _, t in rows]
        assert all(b < a for a, b in zip(thetas, thetas[1:]))
        assert all(t > 0.5 for t in thetas)
        assert thetas[-1] - 0.5 < 0.01

    def test_invalid_h0_rejected(self):
        with pytest.raises(ParameterInfeasibleError):
            prop16_limit(1.0)


class TestGate:
    def test_two_equal_disks_pass(self):
        report = gate_theorem(scenario_by_name("two_equal_disks"))
        assert report.passed
        assert report.lower_bound == pytest.approx(1.0 / 3.0, abs=1e-6)
        assert report.rho_critical >= report.lower_bound
        assert report.rho_minimax >= report.lower_bound

    def test_disk_point_equality_case(self):
        report = gate_theorem(scenario_by_name("disk_point"))
        assert report.passed
        assert report.rho_critical == pytest.approx(0.5, abs=0.05)
        assert report.rho_minimax == pytest.approx(0.5, abs=0.05)
