"""Command-line front end.

Every command reads one JSON document, dispatches to the corresponding
library operation, and emits one deterministic JSON result: identical
document, command, and seed always produce byte-identical output.  Module
errors surface as structured diagnostics with a nonzero exit status
(1 for operation errors, 2 for parse/schema errors).
"""

from __future__ import annotations

import argparse
import sys

from . import documents as docs
from .errors import NeutroChoiceError, ParseError, SchemaError
from .family import allocate_compensators, check_compensation, partition_set, product_status
from .tree import construct_path, enumerate_paths
from .triplet import as_rational, classify, classify_threshold, format_rational
from .zorn import find_maximal, verify_report

COMMANDS = (
    "classify",
    "partition",
    "check-compensation",
    "allocate",
    "product-status",
    "find-path",
    "enumerate-paths",
    "find-maximal",
    "verify-report",
    "generate-assignment",
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="neutrochoice",
        description="Triplet-valued choice over set families, prefix trees, and inclusion families.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("document", help="path to a JSON input document")
        cmd.add_argument("--seed", type=int, default=None, help="override the rng seed")
        cmd.add_argument("--bound", type=int, default=None, help="override the rng denominator bound")
        cmd.add_argument("--output", default=None, help="write the result here instead of stdout")
        if name == "classify":
            cmd.add_argument("--threshold", default=None, help="classify against a num/den threshold")
        if name in ("find-path", "enumerate-paths"):
            cmd.add_argument("--horizon", type=int, default=None, help="override the tree horizon")
        if name == "enumerate-paths":
            cmd.add_argument("--count", type=int, required=True, help="number of paths to enumerate")
    return parser


def _merged_rng_document(args) -> dict:
    raw = docs.load_document(args.document)
    if args.seed is not None or args.bound is not None:
        rng = dict(raw.get("rng", {}))
        if args.seed is not None:
            rng["seed"] = args.seed
        if args.bound is not None:
            rng["denominator_bound"] = args.bound
        raw = {**raw, "rng": rng}
    return raw


def _prepared_document(args) -> dict:
    doc = docs.validate_document(_merged_rng_document(args))
    if "rng" in doc:
        doc = docs.generate_assignment(doc)
    return doc


def _classify_outputs(doc: dict, threshold: str | None) -> dict:
    if threshold is not None:
        try:
            threshold = format_rational(as_rational(threshold))
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise SchemaError(f"invalid threshold {threshold!r}: {exc}", address="threshold") from exc
    if doc["kind"] == "family":
        choice = docs.family_choice(doc)
        tables = []
        for i, raw_set in enumerate(doc["sets"]):
            table = {}
            for element in raw_set:
                triplet = choice.triplet(i, element)
                if threshold is None:
                    table[element] = classify(triplet).value
                else:
                    table[element] = classify_threshold(triplet, threshold).value
            tables.append(table)
        outputs: dict = {"verdicts": tables}
    elif doc["kind"] == "tree":
        tc = docs.tree_choice(doc)
        table = {}
        for node in doc["strings"]:
            triplet = tc.assignment[node]
            if threshold is None:
                table[node] = classify(triplet).value
            else:
                table[node] = classify_threshold(triplet, threshold).value
        outputs = {"verdicts": table}
    else:
        raise SchemaError("classify expects a family or tree document", address="kind")
    if threshold is not None:
        outputs["threshold"] = threshold
    return outputs


def _require_kind(doc: dict, kind: str, command: str) -> None:
    if doc["kind"] != kind:
        raise SchemaError(f"{command} expects a {kind} document, got {doc['kind']!r}", address="kind")


def _dispatch(args) -> dict:
    command = args.command
    if command == "generate-assignment":
        return docs.generate_assignment(_merged_rng_document(args))

    if command == "verify-report":
        raw = docs.load_document(args.document)
        if "kind" not in raw and "input" in raw:
            # a find-maximal result file: the echoed input carries the family
            report_raw = raw.get("outputs", {}).get("report")
            doc = docs.validate_document(raw["input"])
        else:
            report_raw = raw.pop("report", None)
            doc = docs.validate_document(raw)
        _require_kind(doc, "zorn", command)
        if report_raw is None:
            raise SchemaError("verify-report needs a 'report' to check", address="report")
        family, _table = docs.zorn_inputs(doc)
        report = docs.report_from_json(report_raw)
        valid = verify_report(family, report)
        return {"command": command, "input": doc, "outputs": {"valid": valid}}

    if getattr(args, "count", None) is not None and args.count < 1:
        raise SchemaError(f"--count must be positive, got {args.count}", address="count")
    if getattr(args, "horizon", None) is not None and args.horizon < 1:
        raise SchemaError(f"--horizon must be positive, got {args.horizon}", address="horizon")
    doc = _prepared_document(args)
    if command == "classify":
        outputs = _classify_outputs(doc, args.threshold)
    elif command == "partition":
        _require_kind(doc, "family", command)
        choice = docs.family_choice(doc)
        outputs = {
            "partitions": [
                {
                    "chosen": list(part.chosen),
                    "not_chosen": list(part.not_chosen),
                    "indeterminate": list(part.indeterminate),
                }
                for part in (
                    partition_set(choice, i) for i in range(len(choice.family))
                )
            ]
        }
    elif command == "check-compensation":
        _require_kind(doc, "family", command)
        report = check_compensation(docs.family_choice(doc))
        outputs = {"holds": report.holds, "uncompensatable": list(report.uncompensatable)}
    elif command == "allocate":
        _require_kind(doc, "family", command)
        plan = allocate_compensators(docs.family_choice(doc))
        outputs = {"plan": docs.plan_to_json(plan)}
    elif command == "product-status":
        _require_kind(doc, "family", command)
        status = product_status(docs.family_choice(doc))
        outputs = {
            "status": {
                "kind": status.kind.value,
                "witness": list(status.witness) if status.witness is not None else None,
            }
        }
    elif command == "find-path":
        _require_kind(doc, "tree", command)
        trace = construct_path(docs.tree_choice(doc, horizon_override=args.horizon))
        outputs = {"trace": docs.trace_to_json(trace)}
    elif command == "enumerate-paths":
        _require_kind(doc, "tree", command)
        traces = enumerate_paths(
            docs.tree_choice(doc, horizon_override=args.horizon), args.count
        )
        outputs = {"traces": [docs.trace_to_json(trace) for trace in traces]}
    elif command == "find-maximal":
        _require_kind(doc, "zorn", command)
        family, table = docs.zorn_inputs(doc)
        report = find_maximal(family, table)
        outputs = {"report": docs.report_to_json(report)}
    else:
        raise SchemaError(f"unknown command {command!r}")
    return {"command": command, "input": doc, "outputs": outputs}


def _emit(payload: dict, output_path: str | None) -> None:
    text = docs.dumps_canonical(payload)
    if output_path is None:
        sys.stdout.write(text)
    else:
        with open(output_path, "w", encoding="utf-8") as handle:
            handle.write(text)


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        result = _dispatch(args)
    except (ParseError, SchemaError) as exc:
        _emit(
            {
                "command": args.command,
                "diagnostics": [
                    {"type": exc.code, "message": str(exc), "address": exc.address}
                ],
            },
            args.output,
        )
        return 2
    except NeutroChoiceError as exc:
        _emit(
            {
                "command": args.command,
                "diagnostics": [
                    {"type": exc.code, "message": str(exc), "address": exc.address}
                ],
            },
            args.output,
        )
        return 1
    _emit(result, args.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
