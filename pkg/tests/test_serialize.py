"""Serialization round trips and schema validation."""

from fractions import Fraction

import pytest

from ghzlocal import (
    MeasurementContext,
    MicroState,
    OutcomeAssignment,
    SearchSpec,
    Site,
    combination_distribution,
    verify_ac,
    verify_dm,
)
from ghzlocal.builtin import reproduce_section4
from ghzlocal.serialize import (
    FormatError,
    assignment_to_json,
    combinations_to_csv,
    combinations_to_json,
    fraction_from_str,
    fraction_to_str,
    microstate_from_json,
    microstate_to_json,
    model_from_json,
    model_to_json,
    parse_context_arg,
    parse_outcomes_arg,
    repro_report_to_json,
    search_spec_from_json,
    search_spec_to_json,
    verification_report_to_json,
)


def test_fraction_strings():
    assert fraction_to_str(Fraction(1, 2)) == "1/2"
    assert fraction_to_str(Fraction(0)) == "0/1"
    assert fraction_to_str(Fraction(1)) == "1/1"
    assert fraction_from_str("5/12") == Fraction(5, 12)
    with pytest.raises(FormatError):
        fraction_from_str("1/0")
    with pytest.raises(FormatError):
        fraction_from_str("abc")


def test_microstate_round_trip():
    state = MicroState((1, -1, 1, -1, 1, 1, 1, -1, 1))
    assert microstate_from_json(microstate_to_json(state)) == state
    with pytest.raises(FormatError):
        microstate_from_json([1, 2, 3])


def test_model_round_trip(m3, m1, m2):
    for model in (m3, m1, m2):
        document = model_to_json(model)
        assert document["schema_version"] == 1
        assert len(document["states"]) == 128
        again = model_from_json(document)
        assert again == model


def test_model_from_json_rejects_bad_documents():
    with pytest.raises(FormatError):
        model_from_json([])
    with pytest.raises(FormatError):
        model_from_json({"name": "x", "states": [{"values": [1] * 9}]})
    with pytest.raises(FormatError):
        model_from_json({"name": "x", "states": []})


def test_context_parsing():
    ctx = parse_context_arg("x1,y2,y3")
    assert ctx == MeasurementContext.from_labels("x1", "y2", "y3")
    with pytest.raises(ValueError):
        parse_context_arg("x1,y1")
    with pytest.raises(ValueError):
        parse_context_arg("q7")
    with pytest.raises(ValueError):
        parse_context_arg("")


def test_outcomes_parsing():
    ctx = parse_context_arg("x1,y2")
    assert parse_outcomes_arg("+1,-1", ctx) == (1, -1)
    with pytest.raises(ValueError):
        parse_outcomes_arg("+1", ctx)
    with pytest.raises(ValueError):
        parse_outcomes_arg("+1,0", ctx)


def test_assignment_json_shape():
    assign = OutcomeAssignment.of(
        {Site.from_label("x1"): 1, Site.from_label("y2"): -1}
    )
    assert assignment_to_json(assign) == {
        "sites": [["x", 1], ["y", 2]],
        "outcomes": [1, -1],
    }


def test_verification_report_json(m3, all_detected_model):
    good = verification_report_to_json(verify_ac(m3))
    assert good["pass"] is True and good["failures"] == []
    bad = verification_report_to_json(verify_ac(all_detected_model))
    assert bad["pass"] is False
    first = bad["failures"][0]
    assert first["rule"] == "ac"
    assert set(first) == {"rule", "context", "assignment", "expected", "actual"}
    dm = verification_report_to_json(verify_dm(m3))
    assert dm["check"] == "dm" and dm["pass"] is True


def test_combinations_csv_and_json(m1):
    dist = combination_distribution(m1)
    csv_text = combinations_to_csv(dist)
    lines = csv_text.strip().splitlines()
    assert lines[0] == "x1,y1,x2,y2,x3,y3,probability,surviving_triads"
    assert len(lines) == 1 + 48 + 1  # header, combinations, all-undetected row
    assert lines[-1] == "U,U,U,U,U,U,1/2,0"
    document = combinations_to_json("M1", dist)
    assert document["undetected_probability"] == "1/2"
    assert len(document["combinations"]) == 48
    assert all(row["probability"] == "1/96" for row in document["combinations"])


def test_search_spec_round_trip():
    spec = SearchSpec(failure_count=3, ddists_per_state=(1, 1), limit=5)
    assert search_spec_from_json(search_spec_to_json(spec)) == spec
    assert search_spec_from_json({"failure_count": 1, "ddists_per_state": 3}) == SearchSpec(
        failure_count=1, ddists_per_state=(3, 3)
    )


def test_search_spec_rejects_bad_documents():
    with pytest.raises(FormatError):
        search_spec_from_json({"failure": 1})
    with pytest.raises(FormatError):
        search_spec_from_json({"failure_count": "three"})
    with pytest.raises(FormatError):
        search_spec_from_json({"ddists_per_state": [1, 2, 3]})
    with pytest.raises(FormatError):
        search_spec_from_json("nope")


def test_repro_report_json():
    document = repro_report_to_json(reproduce_section4("M3"))
    assert document["model"] == "M3"
    assert document["pass"] is True
    assert all(set(c) == {"name", "expected", "actual", "pass"} for c in document["checks"])
