"""Documented JSON and CSV forms for every boundary object.

All probabilities cross the boundary as exact "p/q" strings, never decimals;
all documents carry a schema_version field.
"""

from __future__ import annotations

import csv
import io
from fractions import Fraction
from typing import Any

from .builtin import ReproductionReport
from .models import (
    AcFailure,
    CombinationDistribution,
    CountFailure,
    DDistribution,
    DmFailure,
    Model,
    MSpecification,
    VerificationReport,
)
from .qm import OutcomeAssignment
from .search import SearchSpec
from .state_space import MeasurementContext, MicroState, Site

SCHEMA_VERSION = 1


class FormatError(ValueError):
    """A document (model file, search spec, ...) does not match its schema."""


def fraction_to_str(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def fraction_from_str(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational {text!r}") from exc


# --------------------------------------------------------------------------- states


def microstate_to_json(state: MicroState) -> list[int]:
    return list(state.values)


def microstate_from_json(values: Any) -> MicroState:
    if not isinstance(values, list) or len(values) != 9:
        raise FormatError(f"microstate must be a JSON array of 9 integers: {values!r}")
    try:
        return MicroState(tuple(int(v) for v in values))
    except (TypeError, ValueError) as exc:
        raise FormatError(str(exc)) from exc


def ddistribution_to_json(ddist: DDistribution) -> list[str]:
    return list(ddist.flags)


def ddistribution_from_json(flags: Any) -> DDistribution:
    if not isinstance(flags, list) or len(flags) != 9:
        raise FormatError(f"d-distribution must be a JSON array of 9 flags: {flags!r}")
    try:
        return DDistribution(tuple(str(f) for f in flags))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


# --------------------------------------------------------------------------- models


def model_to_json(model: Model) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "name": model.name,
        "states": [
            {
                "values": microstate_to_json(state),
                "ddists": [ddistribution_to_json(dd) for dd in family],
            }
            for state, family in model.assignment
        ],
    }


def model_from_json(data: Any) -> Model:
    if not isinstance(data, dict):
        raise FormatError("model document must be a JSON object")
    name = data.get("name")
    states = data.get("states")
    if not isinstance(name, str) or not isinstance(states, list):
        raise FormatError("model document needs string 'name' and array 'states'")
    mapping = {}
    for entry in states:
        if not isinstance(entry, dict) or "values" not in entry or "ddists" not in entry:
            raise FormatError(f"model state entry needs 'values' and 'ddists': {entry!r}")
        state = microstate_from_json(entry["values"])
        ddists = entry["ddists"]
        if not isinstance(ddists, list) or not ddists:
            raise FormatError(f"state {state.label} needs a nonempty 'ddists' array")
        if state in mapping:
            raise FormatError(f"duplicate state {state.label} in model document")
        mapping[state] = [ddistribution_from_json(d) for d in ddists]
    try:
        return Model.from_state_map(name, mapping)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


# --------------------------------------------------------------------------- contexts


def parse_context_arg(text: str) -> MeasurementContext:
    """Parse a context argument like "x1,y2,y3"; raises ValueError when malformed."""
    labels = [token.strip() for token in text.split(",") if token.strip()]
    if not labels:
        raise ValueError(f"empty context argument {text!r}")
    sites = tuple(Site.from_label(lb) for lb in labels)
    return MeasurementContext(sites)


def parse_outcomes_arg(text: str, context: MeasurementContext) -> tuple[int, ...]:
    """Parse an outcomes argument like "+1,-1" against a context."""
    tokens = [token.strip() for token in text.split(",")]
    if set(tokens) - {"+1", "-1", "1"}:
        raise ValueError(f"outcomes must be +1 or -1: {text!r}")
    outcomes = tuple(1 if t in ("+1", "1") else -1 for t in tokens)
    if len(outcomes) != len(context.sites):
        raise ValueError(
            f"{len(outcomes)} outcomes for {len(context.sites)}-site context"
        )
    return outcomes


def assignment_to_json(assign: OutcomeAssignment) -> dict[str, Any]:
    return {
        "sites": [[s.axis.value, s.particle] for s in assign.context.sites],
        "outcomes": list(assign.outcomes),
    }


# --------------------------------------------------------------------------- reports


def _failure_to_json(failure: Any) -> dict[str, Any]:
    if isinstance(failure, AcFailure):
        return {
            "rule": failure.rule,
            "context": failure.context.label,
            "assignment": assignment_to_json(failure.assignment),
            "expected": fraction_to_str(failure.expected),
            "actual": fraction_to_str(failure.actual),
        }
    if isinstance(failure, DmFailure):
        return {
            "rule": failure.rule,
            "state": microstate_to_json(failure.state),
            "ddist": ddistribution_to_json(failure.ddist),
            "triad": failure.triad.value,
        }
    if isinstance(failure, CountFailure):
        return {
            "rule": failure.rule,
            "quantity": failure.quantity,
            "expected": failure.expected,
            "actual": failure.actual,
        }
    raise TypeError(f"unknown failure type {type(failure).__name__}")


def verification_report_to_json(report: VerificationReport) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "check": report.check,
        "pass": report.passed,
        "failures": [_failure_to_json(f) for f in report.failures],
        "skipped": list(report.skipped),
    }


def repro_report_to_json(report: ReproductionReport) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "model": report.model,
        "pass": report.passed,
        "checks": [
            {
                "name": c.name,
                "expected": c.expected,
                "actual": c.actual,
                "pass": c.passed,
            }
            for c in report.checks
        ],
    }


# --------------------------------------------------------------------------- combinations

_XY_HEADER = ["x1", "y1", "x2", "y2", "x3", "y3"]


def combinations_to_json(model_name: str, dist: CombinationDistribution) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "model": model_name,
        "combinations": [
            {
                "slots": list(combo.slots),
                "probability": fraction_to_str(mass),
                "surviving_triads": combo.surviving_triads,
            }
            for combo, mass in dist.rows()
        ],
        "undetected_probability": fraction_to_str(dist.undetected),
    }


def combinations_to_csv(dist: CombinationDistribution) -> str:
    """CSV rows of the distribution; the all-undetected point is the final row,
    written with U in every slot column."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(_XY_HEADER + ["probability", "surviving_triads"])
    for combo, mass in dist.rows():
        writer.writerow(list(combo.slots) + [fraction_to_str(mass), combo.surviving_triads])
    if dist.undetected:
        writer.writerow(["U"] * 6 + [fraction_to_str(dist.undetected), 0])
    return buffer.getvalue()


# --------------------------------------------------------------------------- search specs


_SEARCH_SPEC_KEYS = {
    "schema_version",
    "failure_count",
    "z_always_detected",
    "per_element_uniformity",
    "ddists_per_state",
    "star_elements_all_undetected",
    "limit",
}


def search_spec_to_json(spec: SearchSpec) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "failure_count": spec.failure_count,
        "z_always_detected": spec.z_always_detected,
        "per_element_uniformity": spec.per_element_uniformity,
        "ddists_per_state": list(spec.ddists_per_state) if spec.ddists_per_state else None,
        "star_elements_all_undetected": spec.star_elements_all_undetected,
        "limit": spec.limit,
    }


def search_spec_from_json(data: Any) -> SearchSpec:
    if not isinstance(data, dict):
        raise FormatError("search spec must be a JSON object")
    unknown = set(data) - _SEARCH_SPEC_KEYS
    if unknown:
        raise FormatError(f"unknown search spec keys: {sorted(unknown)}")
    ddists = data.get("ddists_per_state")
    if ddists is None:
        ddists_range = None
    elif isinstance(ddists, int):
        ddists_range = (ddists, ddists)
    elif (
        isinstance(ddists, list)
        and len(ddists) == 2
        and all(isinstance(v, int) for v in ddists)
    ):
        ddists_range = (ddists[0], ddists[1])
    else:
        raise FormatError(f"ddists_per_state must be an int or [lo, hi]: {ddists!r}")
    failure_count = data.get("failure_count")
    if failure_count is not None and not isinstance(failure_count, int):
        raise FormatError(f"failure_count must be an integer: {failure_count!r}")
    limit = data.get("limit")
    if limit is not None and not isinstance(limit, int):
        raise FormatError(f"limit must be an integer: {limit!r}")
    return SearchSpec(
        failure_count=failure_count,
        z_always_detected=bool(data.get("z_always_detected", True)),
        per_element_uniformity=bool(data.get("per_element_uniformity", True)),
        ddists_per_state=ddists_range,
        star_elements_all_undetected=bool(data.get("star_elements_all_undetected", False)),
        limit=limit,
    )


# --------------------------------------------------------------------------- m-specifications


def mspec_to_json(mspec: MSpecification) -> list[int]:
    return list(mspec.values)
