"""Command-line front end.

Subcommands: states, verify, probs, combinations, search, reproduce, export.
Exit codes: 0 success, 1 verification failed, 2 usage error, 3 I/O or parse
error.  Output is a human table by default; --format json (and, for
combinations, csv) switches to the machine schemas.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import serialize
from .builtin import BUILTIN_SELECTORS, builtin_model, reproduce_section4
from .models import (
    Model,
    UndefinedConditionalError,
    census,
    combination_distribution,
    conditional_probability,
    detection_probability,
    verify_ac,
    verify_dm,
)
from .qm import OutcomeAssignment, outcome_assignments, qm_probability
from .search import ExpectedCounts, UnboundedSearchError, search_models, verify_counts
from .state_space import PartitionElement, classify, enumerate_ghz_microstates

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


@dataclass(frozen=True)
class CommandOutcome:
    exit_code: int
    payload: str = ""


def _load_model(source: str) -> Model:
    if source in BUILTIN_SELECTORS:
        return builtin_model(source)
    try:
        data = json.loads(Path(source).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read model {source!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {source!r}: {exc}") from exc
    try:
        return serialize.model_from_json(data)
    except serialize.FormatError as exc:
        raise InputError(f"invalid model file {source!r}: {exc}") from exc


def _dump(document: object) -> str:
    return json.dumps(document, indent=2, sort_keys=True)


# --------------------------------------------------------------------------- states


def cmd_states(args: argparse.Namespace) -> CommandOutcome:
    states = enumerate_ghz_microstates()
    labelled = [(state, classify(state)) for state in states]
    if args.format == "json":
        document = {
            "schema_version": serialize.SCHEMA_VERSION,
            "count": len(states),
            "states": [
                {"values": serialize.microstate_to_json(s), "element": el.value}
                for s, el in labelled
            ],
        }
        return CommandOutcome(EXIT_OK, _dump(document))
    lines = []
    if args.partition:
        for element in PartitionElement:
            members = [s for s, el in labelled if el is element]
            lines.append(f"{element.value} ({len(members)} states)")
            lines.extend(f"  {s.label}" for s in members)
    else:
        lines.extend(f"{i:4d}  {s.label}  {el.value}" for i, (s, el) in enumerate(labelled, 1))
    tally = {el: sum(1 for _, e in labelled if e is el) for el in PartitionElement}
    lines.append(
        f"{len(states)} states in {len(tally)} partition elements"
        f" of {set(tally.values()).pop() if len(set(tally.values())) == 1 else 'varying'} states each"
    )
    return CommandOutcome(EXIT_OK, "\n".join(lines))


# --------------------------------------------------------------------------- verify


def _parse_expected_counts(text: str) -> ExpectedCounts:
    parts = text.split(",")
    if len(parts) not in (2, 3):
        raise UsageError(
            f"--counts expects 'MSPECS,COMBOS[,DDISTS]', got {text!r}"
        )
    try:
        numbers = [int(p) for p in parts]
    except ValueError as exc:
        raise UsageError(f"--counts expects integers, got {text!r}") from exc
    return ExpectedCounts(
        m_specifications=numbers[0],
        combinations=numbers[1],
        d_distributions=numbers[2] if len(numbers) == 3 else None,
    )


def cmd_verify(args: argparse.Namespace) -> CommandOutcome:
    model = _load_model(args.model)
    run_all = not (args.ac or args.dm or args.counts)
    reports = []
    if args.ac or run_all:
        reports.append(verify_ac(model))
    if args.dm or run_all:
        reports.append(verify_dm(model))
    if args.counts:
        reports.append(verify_counts(model, _parse_expected_counts(args.counts)))
    ok = all(r.passed for r in reports)
    if args.format == "json":
        document = {
            "schema_version": serialize.SCHEMA_VERSION,
            "model": model.name,
            "pass": ok,
            "reports": [serialize.verification_report_to_json(r) for r in reports],
        }
        return CommandOutcome(EXIT_OK if ok else EXIT_VERIFICATION_FAILED, _dump(document))
    lines = [f"model: {model.name}"]
    for report in reports:
        status = "pass" if report.passed else f"FAIL ({len(report.failures)} failures)"
        extra = f", {len(report.skipped)} contexts skipped" if report.skipped else ""
        lines.append(f"{report.check}: {status}{extra}")
        for failure in report.failures[:10]:
            lines.append(f"  {serialize._failure_to_json(failure)}")
        if len(report.failures) > 10:
            lines.append(f"  ... and {len(report.failures) - 10} more")
    return CommandOutcome(EXIT_OK if ok else EXIT_VERIFICATION_FAILED, "\n".join(lines))


# --------------------------------------------------------------------------- probs


def cmd_probs(args: argparse.Namespace) -> CommandOutcome:
    model = _load_model(args.model)
    try:
        context = serialize.parse_context_arg(args.context)
    except ValueError as exc:
        raise UsageError(f"bad context {args.context!r}: {exc}") from exc
    if args.outcomes:
        try:
            outcomes = serialize.parse_outcomes_arg(args.outcomes, context)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        assignments = [OutcomeAssignment(context, outcomes)]
    else:
        assignments = outcome_assignments(context)
    detection = detection_probability(model, context)
    rows = []
    for assign in assignments:
        try:
            conditional: Optional[Fraction] = conditional_probability(model, assign)
        except UndefinedConditionalError:
            conditional = None
        total = detection * conditional if conditional is not None else Fraction(0)
        rows.append((assign, conditional, total, qm_probability(assign)))
    if args.format == "json":
        document = {
            "schema_version": serialize.SCHEMA_VERSION,
            "model": model.name,
            "context": context.label,
            "detection": serialize.fraction_to_str(detection),
            "rows": [
                {
                    "outcomes": list(assign.outcomes),
                    "conditional": serialize.fraction_to_str(c) if c is not None else None,
                    "total": serialize.fraction_to_str(t),
                    "qm": serialize.fraction_to_str(q),
                }
                for assign, c, t, q in rows
            ],
        }
        return CommandOutcome(EXIT_OK, _dump(document))
    lines = [
        f"model: {model.name}  context: {context.label}",
        f"detection probability: {detection}",
        f"{'outcomes':<12} {'conditional':<12} {'total':<8} qm",
    ]
    for assign, conditional, total, qm_value in rows:
        outs = ",".join(f"{v:+d}" for v in assign.outcomes)
        cond = str(conditional) if conditional is not None else "-"
        lines.append(f"{outs:<12} {cond:<12} {str(total):<8} {qm_value}")
    return CommandOutcome(EXIT_OK, "\n".join(lines))


# --------------------------------------------------------------------------- combinations


def cmd_combinations(args: argparse.Namespace) -> CommandOutcome:
    model = _load_model(args.model)
    dist = combination_distribution(model)
    if args.format == "json":
        return CommandOutcome(EXIT_OK, _dump(serialize.combinations_to_json(model.name, dist)))
    if args.format == "csv":
        return CommandOutcome(EXIT_OK, serialize.combinations_to_csv(dist).rstrip("\n"))
    lines = [f"{'x1':<3} {'y1':<3} {'x2':<3} {'y2':<3} {'x3':<3} {'y3':<3} {'probability':<12} triads"]
    for combo, mass in dist.rows():
        slots = " ".join(f"{s:<3}" for s in combo.slots)
        lines.append(f"{slots} {str(mass):<12} {combo.surviving_triads}")
    if dist.undetected:
        slots = " ".join(f"{'U':<3}" for _ in range(6))
        lines.append(f"{slots} {str(dist.undetected):<12} 0")
    lines.append(
        f"{len(dist.masses)} combinations, total mass {dist.total_mass}"
    )
    return CommandOutcome(EXIT_OK, "\n".join(lines))


# --------------------------------------------------------------------------- search


def cmd_search(args: argparse.Namespace) -> CommandOutcome:
    try:
        data = json.loads(Path(args.spec).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read spec {args.spec!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {args.spec!r}: {exc}") from exc
    try:
        spec = serialize.search_spec_from_json(data)
    except serialize.FormatError as exc:
        raise InputError(f"invalid search spec {args.spec!r}: {exc}") from exc
    if args.limit is not None:
        spec = dataclasses.replace(spec, limit=args.limit)
    try:
        spec.validate()
    except (UnboundedSearchError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    found = list(search_models(spec))
    if args.format == "json":
        lines = [
            json.dumps(serialize.model_to_json(m), sort_keys=True, separators=(",", ":"))
            for m in found
        ]
        lines.append(json.dumps(
            {"schema_version": serialize.SCHEMA_VERSION, "models_found": len(found)},
            sort_keys=True, separators=(",", ":"),
        ))
        return CommandOutcome(EXIT_OK, "\n".join(lines))
    lines = []
    for model in found:
        counts = census(model)
        lines.append(
            f"{model.name}: d-distributions={counts.d_distributions}"
            f" m-specifications={counts.m_specifications}"
            f" combinations={counts.combinations}"
        )
    lines.append(f"models found: {len(found)}")
    return CommandOutcome(EXIT_OK, "\n".join(lines))


# --------------------------------------------------------------------------- reproduce


def cmd_reproduce(args: argparse.Namespace) -> CommandOutcome:
    if args.selector not in BUILTIN_SELECTORS:
        raise UsageError(
            f"unknown model selector {args.selector!r}; use one of {', '.join(BUILTIN_SELECTORS)}"
        )
    report = reproduce_section4(args.selector)
    if args.format == "json":
        return CommandOutcome(
            EXIT_OK if report.passed else EXIT_VERIFICATION_FAILED,
            _dump(serialize.repro_report_to_json(report)),
        )
    lines = [f"reproduction report: {report.model}"]
    for check in report.checks:
        tag = "PASS" if check.passed else "FAIL"
        lines.append(f"{tag}  {check.name}: expected {check.expected}, got {check.actual}")
    n_ok = sum(1 for c in report.checks if c.passed)
    lines.append(f"result: {'PASS' if report.passed else 'FAIL'} ({n_ok}/{len(report.checks)} checks)")
    return CommandOutcome(EXIT_OK if report.passed else EXIT_VERIFICATION_FAILED, "\n".join(lines))


# --------------------------------------------------------------------------- export


def cmd_export(args: argparse.Namespace) -> CommandOutcome:
    model = _load_model(args.model)
    return CommandOutcome(EXIT_OK, _dump(serialize.model_to_json(model)))


# --------------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ghzlocal",
        description="Exact probability engine for finite local detection models of the GHZ experiment.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json", "csv"), default="table")
    common.add_argument("--output", metavar="PATH", help="write output to a file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("states", parents=[common], help="list the 128 GHZ-compatible states")
    p.add_argument("--partition", action="store_true", help="group states by partition element")
    p.set_defaults(func=cmd_states)

    p = sub.add_parser("verify", parents=[common], help="verify a model (builtin name or JSON file)")
    p.add_argument("model")
    p.add_argument("--ac", action="store_true", help="check the adequacy condition")
    p.add_argument("--dm", action="store_true", help="check the detection-masking condition")
    p.add_argument("--counts", metavar="MSPECS,COMBOS[,DDISTS]", help="check census counts")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("probs", parents=[common], help="detection/conditional/total probabilities")
    p.add_argument("model")
    p.add_argument("context", help="comma-separated sites, e.g. x1,y2,y3")
    p.add_argument("--outcomes", help="comma-separated signs, e.g. +1,-1,+1")
    p.set_defaults(func=cmd_probs)

    p = sub.add_parser("combinations", parents=[common], help="export the combination distribution")
    p.add_argument("model")
    p.set_defaults(func=cmd_combinations)

    p = sub.add_parser("search", parents=[common], help="search for models matching a spec file")
    p.add_argument("spec", help="path to a search-spec JSON document")
    p.add_argument("--limit", type=int, help="emit at most this many models")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("reproduce", parents=[common], help="recompute all published values for a builtin model")
    p.add_argument("selector", help="M3, M1 or M2")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("export", parents=[common], help="write a model as JSON")
    p.add_argument("model")
    p.set_defaults(func=cmd_export)
    return parser


_CSV_COMMANDS = {"combinations"}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    if args.format == "csv" and args.command not in _CSV_COMMANDS:
        print(f"error: --format csv is not supported for {args.command}", file=sys.stderr)
        return EXIT_USAGE
    try:
        outcome = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    if outcome.payload:
        if args.output:
            try:
                Path(args.output).write_text(outcome.payload + "\n", encoding="utf-8")
            except OSError as exc:
                print(f"error: cannot write {args.output!r}: {exc}", file=sys.stderr)
                return EXIT_IO
        else:
            print(outcome.payload)
    return outcome.exit_code


def main_entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    main_entry()
