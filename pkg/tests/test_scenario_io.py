import json
from pathlib import Path

import pytest

from routebayes.errors import (
    DanglingReference,
    InfeasibleConstraints,
    IoError,
    ParseError,
    SchemaVersionUnsupported,
    ValidationError,
)
from routebayes.scenario import (
    DEFAULT_TARGET_LOAD_FACTOR,
    dump_scenario,
    load_scenario,
    scenario_from_dict,
    scenario_to_json,
    write_scenario,
)

CORPUS = sorted((Path(__file__).parent / "data" / "corpus").glob("*.json"))
SHIPPED = [
    Path(__file__).parents[1] / "scenarios" / "demo.json",
    Path(__file__).parents[1] / "scenarios" / "fleet_mix.json",
]


def minimal_doc(**overrides):
    doc = {
        "schema_version": "1",
        "fleets": [
            {"name": "jet", "seats": 150, "range_km": 4000,
             "utilization_block_hours_per_week": 65}
        ],
        "routes": [
            {
                "id": "solo", "origin": "AAA", "destination": "BBB",
                "distance_km": 900, "demand_pax_per_week": 800, "average_fare": 120,
                "block_hours_per_flight": 2.5, "cost_per_block_hour": 3500,
                "fixed_cost_per_flight": 1500, "service_score": 0.6,
                "tied_capital": 750000,
            }
        ],
    }
    doc.update(overrides)
    return doc


class TestDefaults:
    def test_minimal_scenario_gets_default_hypotheses(self):
        scenario = scenario_from_dict(minimal_doc())
        assert scenario.hypotheses.ids == ("customer_service", "unavailable_capital", "costs")
        assert len(scenario.weights) == 3

    def test_omitted_weights_default_to_uniform(self):
        scenario = scenario_from_dict(minimal_doc())
        for w in scenario.weights:
            assert w == pytest.approx(1 / 3, abs=1e-12)

    def test_omitted_seed_and_load_factor(self):
        scenario = scenario_from_dict(minimal_doc())
        assert scenario.seed == 0
        assert scenario.target_load_factor == DEFAULT_TARGET_LOAD_FACTOR

    def test_omitted_availability_is_zero(self):
        scenario = scenario_from_dict(minimal_doc())
        assert scenario.availability.counts == {"jet": 0}


class TestValidation:
    def test_bad_weight_sum_names_field(self):
        with pytest.raises(ValidationError) as info:
            scenario_from_dict(minimal_doc(weights=[0.5, 0.5, 0.1]))
        assert info.value.path == "weights"
        assert "1.1" in str(info.value)

    def test_weights_length_mismatch(self):
        with pytest.raises(ValidationError) as info:
            scenario_from_dict(minimal_doc(weights=[0.5, 0.5]))
        assert info.value.path == "weights"

    def test_schema_version_required(self):
        doc = minimal_doc()
        del doc["schema_version"]
        with pytest.raises(SchemaVersionUnsupported):
            scenario_from_dict(doc)
        with pytest.raises(SchemaVersionUnsupported):
            scenario_from_dict(minimal_doc(schema_version="99"))

    def test_unknown_top_level_key(self):
        with pytest.raises(ValidationError) as info:
            scenario_from_dict(minimal_doc(surprise=1))
        assert info.value.path == "surprise"

    def test_dangling_availability_reference(self):
        with pytest.raises(DanglingReference) as info:
            scenario_from_dict(minimal_doc(availability={"ghost": 1}))
        assert info.value.path == "availability.ghost"

    def test_dangling_pinned_fleet(self):
        doc = minimal_doc()
        doc["routes"][0]["fleet"] = "ghost"
        with pytest.raises(DanglingReference) as info:
            scenario_from_dict(doc)
        assert info.value.path == "routes[0].fleet"

    def test_pinned_fleet_out_of_range(self):
        doc = minimal_doc()
        doc["routes"][0]["distance_km"] = 4500
        doc["routes"][0]["fleet"] = "jet"
        with pytest.raises(ValidationError) as info:
            scenario_from_dict(doc)
        assert info.value.path == "routes[0].fleet"

    def test_route_without_capable_fleet(self):
        doc = minimal_doc()
        doc["routes"][0]["distance_km"] = 4500
        with pytest.raises(ValidationError) as info:
            scenario_from_dict(doc)
        assert info.value.path == "routes[0]"

    def test_route_field_error_names_path(self):
        doc = minimal_doc()
        doc["routes"][0]["distance_km"] = -5
        with pytest.raises(ValidationError) as info:
            scenario_from_dict(doc)
        assert "routes[0]" in info.value.path

    def test_nondefault_hypothesis_count_needs_no_routes(self):
        doc = minimal_doc(
            hypotheses=[{"id": f"h{i}"} for i in range(5)],
            weights=[0.2, 0.2, 0.2, 0.2, 0.2],
        )
        with pytest.raises(ValidationError) as info:
            scenario_from_dict(doc)
        assert info.value.path == "hypotheses"

    def test_infeasible_constraints_not_wrapped(self):
        doc = minimal_doc(constraints={"lower": [0.5, 0.5, 0.5], "upper": [1, 1, 1]})
        with pytest.raises(InfeasibleConstraints):
            scenario_from_dict(doc)

    def test_duplicate_route_ids(self):
        doc = minimal_doc()
        doc["routes"].append(dict(doc["routes"][0]))
        with pytest.raises(ValidationError) as info:
            scenario_from_dict(doc)
        assert info.value.path == "routes[1].id"

    def test_bool_is_not_a_number(self):
        doc = minimal_doc(seed=True)
        with pytest.raises(ValidationError):
            scenario_from_dict(doc)

    def test_bad_demand_kind(self):
        doc = minimal_doc(rm_legs=[{
            "id": "x", "capacity": 5, "fare_high": 100, "fare_low": 50,
            "demand_high": {"kind": "weibull", "mean": 2},
            "demand_low": {"kind": "poisson", "mean": 2},
        }])
        with pytest.raises(ValidationError) as info:
            scenario_from_dict(doc)
        assert info.value.path == "rm_legs[0].demand_high.kind"


class TestFileHandling:
    def test_missing_file_is_io_error(self, tmp_path):
        with pytest.raises(IoError):
            load_scenario(tmp_path / "nope.json")

    def test_parse_error_reports_position(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"schema_version": "1",}')
        with pytest.raises(ParseError) as info:
            load_scenario(bad)
        assert info.value.line == 1

    def test_write_then_load(self, tmp_path):
        scenario = scenario_from_dict(minimal_doc(seed=12))
        out = tmp_path / "echo.json"
        write_scenario(scenario, out)
        again = load_scenario(out)
        assert again == scenario


@pytest.mark.parametrize("path", CORPUS + SHIPPED, ids=lambda p: p.name)
class TestCorpus:
    def test_roundtrip_value_identical(self, path):
        scenario = load_scenario(path)
        again = scenario_from_dict(json.loads(scenario_to_json(scenario)))
        assert again == scenario

    def test_dump_idempotent(self, path):
        scenario = load_scenario(path)
        first = dump_scenario(scenario)
        second = dump_scenario(scenario_from_dict(first))
        assert first == second
