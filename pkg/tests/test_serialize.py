import json

import numpy as np
import pytest

from convfactor.approx import PiecewisePolynomial
from convfactor.errors import ConfigError
from convfactor.experiments import scenario_by_name
from convfactor.geometry import (
    CompactSet,
    ConvexPolygon,
    Disk,
    Segment,
    SinglePoint,
)
from convfactor.potential import FitParams, fit_greens, greens_values
from convfactor.serialize import (
    SCHEMA_VERSION,
    compact_set_to_records,
    component_to_record,
    content_hash,
    greens_to_record,
    load_scenario_file,
    record_to_component,
    record_to_greens,
    record_to_piecewise,
    records_to_compact_set,
    piecewise_to_record,
    scenario_to_record,
)


@pytest.mark.parametrize("comp", [
    Disk(1.0 + 2.0j, 0.5),
    ConvexPolygon((0.0, 1.0, 1.0 + 1.0j, 1.0j)),
    Segment(-1.0, 2.0 + 1.0j),
    SinglePoint(3.0 - 1.0j),
])
def test_component_round_trip(comp):
    assert record_to_component(component_to_record(comp)) == comp


def test_compact_set_round_trip():
    L = CompactSet((Disk(0.0, 1.0), SinglePoint(2.0)))
    assert records_to_compact_set(compact_set_to_records(L)) == L


def test_piecewise_round_trip():
    F = PiecewisePolynomial(([0.0, 1.0j], [2.0]))
    G = record_to_piecewise(piecewise_to_record(F))
    for a, b in zip(F.coefficients, G.coefficients):
        np.testing.assert_array_equal(a, b)


def test_greens_round_trip_preserves_values():
    L = CompactSet((Disk(0.0, 1.0),))
    model = fit_greens(L, FitParams())
    restored = record_to_greens(greens_to_record(model))
    zs = 2.0 * np.exp(1j * np.linspace(0, 2 * np.pi, 17))
    np.testing.assert_allclose(
        greens_values(model, zs), greens_values(restored, zs), atol=1e-14
    )


def test_unknown_kind_rejected():
    with pytest.raises(ConfigError):
        record_to_component({"kind": "annulus"})


def test_malformed_record_rejected():
    with pytest.raises(ConfigError):
        record_to_component({"kind": "disk", "center": [0.0, 0.0]})


class TestScenarioFiles:
    def test_round_trip(self, tmp_path):
        s = scenario_by_name("two_equal_disks")
        path = tmp_path / "scenario.json"
        path.write_text(json.dumps(scenario_to_record(s)))
        loaded = load_scenario_file(path)
        assert loaded.name == s.name
        assert loaded.set == s.set
        assert loaded.window == s.window

    def test_syntax_error_is_line_anchored(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{\n  "name": "x",\n  "oops"\n}\n')
        with pytest.raises(ConfigError, match=r"line \d+, column \d+"):
            load_scenario_file(path)

    def test_schema_version_checked(self, tmp_path):
        path = tmp_path / "old.json"
        path.write_text(json.dumps({"schema_version": SCHEMA_VERSION + 1}))
        with pytest.raises(ConfigError, match="schema_version"):
            load_scenario_file(path)

    def test_missing_fields_reported(self, tmp_path):
        path = tmp_path / "incomplete.json"
        path.write_text(json.dumps({"schema_version": SCHEMA_VERSION}))
        with pytest.raises(ConfigError):
            load_scenario_file(path)


def test_content_hash_is_stable_and_sensitive():
    s = scenario_by_name("two_equal_disks")
    rec = scenario_to_record(s)
    assert content_hash(rec) == content_hash(scenario_to_record(s))
    other = scenario_to_record(scenario_by_name("disk_point"))
    assert content_hash(rec) != content_hash(other)
