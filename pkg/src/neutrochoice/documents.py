"""JSON documents for the CLI: parsing, schema validation, canonical
serialization, and seeded assignment generation.

Three document kinds share one shape: ``family`` (sets plus a per-element
triplet table), ``tree`` (strings, a horizon, and a per-node table), and
``zorn`` (members plus a per-fan-pair table).  A document carries exactly
one of an explicit table or an ``rng`` block; generation replaces the
``rng`` block with an explicit table filled in canonical order, so the
result is self-contained and replayable.
"""

from __future__ import annotations

import json
import random
from typing import Any

from .errors import NeutroChoiceError, ParseError, SchemaError
from . import tree as tree_mod
from . import zorn as zorn_mod
from .family import NeutroChoice, SetFamily, build_choice
from .triplet import parse_triplet, random_triplet
from .zorn import MaximalReport, Provenance, SuccessorEntry, ZornFamily

KINDS = ("family", "tree", "zorn")


def load_document(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as handle:
            doc = json.load(handle)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"{path} is not valid JSON: {exc.msg}",
            address=f"line {exc.lineno}, column {exc.colno}",
        ) from exc
    if not isinstance(doc, dict):
        raise SchemaError("document root must be an object")
    return doc


def _schema(condition: bool, message: str, address: str | None = None) -> None:
    if not condition:
        raise SchemaError(message, address=address)


def _canonical_triplet(raw: Any, address: str) -> list[str]:
    _schema(isinstance(raw, list) and len(raw) == 3, "triplet must be a 3-item list", address)
    _schema(all(isinstance(v, str) for v in raw), "triplet components must be 'num/den' strings", address)
    try:
        return parse_triplet(raw).serialize()
    except (NeutroChoiceError, ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"invalid triplet at {address}: {exc}", address=address) from exc


def _validate_rng(raw: Any) -> dict:
    _schema(isinstance(raw, dict), "rng must be an object", "rng")
    _schema(
        isinstance(raw.get("seed"), int) and not isinstance(raw.get("seed"), bool),
        "rng.seed must be an integer",
        "rng.seed",
    )
    bound = raw.get("denominator_bound")
    _schema(
        isinstance(bound, int) and not isinstance(bound, bool),
        "rng.denominator_bound must be an integer",
        "rng.denominator_bound",
    )
    return {"seed": raw["seed"], "denominator_bound": bound}


def _validate_family(doc: dict) -> dict:
    sets = doc.get("sets")
    _schema(isinstance(sets, list) and sets, "family document needs a non-empty 'sets' list", "sets")
    out_sets = []
    for i, raw_set in enumerate(sets):
        _schema(isinstance(raw_set, list) and raw_set, f"set {i} must be a non-empty list", f"sets[{i}]")
        _schema(all(isinstance(e, str) for e in raw_set), f"set {i} elements must be strings", f"sets[{i}]")
        _schema(len(set(raw_set)) == len(raw_set), f"set {i} lists a duplicate element", f"sets[{i}]")
        out_sets.append(list(raw_set))
    out: dict = {"kind": "family", "sets": out_sets}
    if "assignment" in doc:
        assignment = doc["assignment"]
        _schema(
            isinstance(assignment, list) and len(assignment) == len(out_sets),
            "assignment must list one object per set",
            "assignment",
        )
        out_assignment = []
        for i, (raw_set, table) in enumerate(zip(out_sets, assignment)):
            _schema(isinstance(table, dict), f"assignment[{i}] must be an object", f"assignment[{i}]")
            for element in raw_set:
                _schema(
                    element in table,
                    f"assignment[{i}] is missing element {element!r}",
                    f"assignment[{i}][{element!r}]",
                )
            _schema(
                set(table) == set(raw_set),
                f"assignment[{i}] names elements outside set {i}",
                f"assignment[{i}]",
            )
            out_assignment.append(
                {
                    element: _canonical_triplet(table[element], f"assignment[{i}][{element!r}]")
                    for element in raw_set
                }
            )
        out["assignment"] = out_assignment
    return out


def _validate_tree(doc: dict) -> dict:
    strings = doc.get("strings")
    horizon = doc.get("horizon")
    _schema(isinstance(strings, list), "tree document needs a 'strings' list", "strings")
    _schema(
        isinstance(horizon, int) and not isinstance(horizon, bool) and horizon >= 1,
        "horizon must be a positive integer",
        "horizon",
    )
    for i, s in enumerate(strings):
        _schema(isinstance(s, str) and all(b in "01" for b in s), f"strings[{i}] must be a binary string", f"strings[{i}]")
        _schema(len(s) <= horizon, f"strings[{i}] is longer than the horizon", f"strings[{i}]")
    closure = sorted(
        tree_mod.build_tree(strings, horizon).nodes, key=lambda n: (len(n), n)
    )
    out: dict = {"kind": "tree", "strings": closure, "horizon": horizon}
    if "assignment" in doc:
        table = doc["assignment"]
        _schema(isinstance(table, dict), "assignment must be an object", "assignment")
        for node in closure:
            _schema(node in table, f"assignment is missing node {node!r}", f"assignment[{node!r}]")
        _schema(set(table) == set(closure), "assignment names nodes outside the tree", "assignment")
        out["assignment"] = {
            node: _canonical_triplet(table[node], f"assignment[{node!r}]") for node in closure
        }
    return out


def _validate_zorn(doc: dict) -> dict:
    members = doc.get("members")
    _schema(isinstance(members, list) and members, "zorn document needs a non-empty 'members' list", "members")
    out_members = []
    for i, raw in enumerate(members):
        _schema(isinstance(raw, list), f"members[{i}] must be a list", f"members[{i}]")
        _schema(all(isinstance(e, str) for e in raw), f"members[{i}] elements must be strings", f"members[{i}]")
        _schema(len(set(raw)) == len(raw), f"members[{i}] lists a duplicate element", f"members[{i}]")
        out_members.append(sorted(raw))
    _schema(
        len({frozenset(m) for m in out_members}) == len(out_members),
        "members must be distinct as sets",
        "members",
    )
    out: dict = {"kind": "zorn", "members": out_members}
    family = ZornFamily(members=tuple(frozenset(m) for m in out_members))
    pairs = zorn_mod.fan_pairs(family)
    pair_set = set(pairs)
    if "fan_triplets" in doc:
        raw_table = doc["fan_triplets"]
        _schema(isinstance(raw_table, list), "fan_triplets must be a list", "fan_triplets")
        seen: dict[tuple[int, int], list[str]] = {}
        for i, record in enumerate(raw_table):
            _schema(isinstance(record, dict), f"fan_triplets[{i}] must be an object", f"fan_triplets[{i}]")
            member = record.get("member")
            entry = record.get("entry")
            _schema(
                isinstance(member, int) and isinstance(entry, int),
                f"fan_triplets[{i}] needs integer 'member' and 'entry' indices",
                f"fan_triplets[{i}]",
            )
            _schema(
                (member, entry) in pair_set,
                f"fan_triplets[{i}]: member {entry} is not a strict superset of member {member}",
                f"fan_triplets[{i}]",
            )
            _schema((member, entry) not in seen, f"fan_triplets[{i}] duplicates a pair", f"fan_triplets[{i}]")
            seen[(member, entry)] = _canonical_triplet(
                record.get("triplet"), f"fan_triplets[{i}].triplet"
            )
        for pair in pairs:
            _schema(
                pair in seen,
                f"fan_triplets is missing the pair (member {pair[0]}, entry {pair[1]})",
                f"fan_triplets({pair[0]},{pair[1]})",
            )
        out["fan_triplets"] = [
            {"member": member, "entry": entry, "triplet": seen[(member, entry)]}
            for member, entry in pairs
        ]
    return out


def validate_document(doc: dict) -> dict:
    """Validate a raw document and return its canonical form.

    Canonical means: triplets in lowest terms, tree strings closed under
    prefixes and sorted, zorn members element-sorted, fan tables in fan
    order.  Exactly one of an explicit table or an ``rng`` block must be
    present.
    """
    kind = doc.get("kind")
    _schema(kind in KINDS, f"kind must be one of {list(KINDS)}", "kind")
    table_key = "fan_triplets" if kind == "zorn" else "assignment"
    has_table = table_key in doc
    has_rng = "rng" in doc
    _schema(
        has_table != has_rng,
        f"exactly one of '{table_key}' or 'rng' must be present",
        table_key,
    )
    if kind == "family":
        out = _validate_family(doc)
    elif kind == "tree":
        out = _validate_tree(doc)
    else:
        out = _validate_zorn(doc)
    if has_rng:
        out["rng"] = _validate_rng(doc["rng"])
    return out


def generate_assignment(doc: dict, seed: int | None = None, bound: int | None = None) -> dict:
    """Replace a document's ``rng`` block with an explicit triplet table.

    Triplets are drawn in canonical order (family: set order then element
    order; tree: level then lexicographic; zorn: fan-pair order), so a seed
    fully determines the output document.
    """
    doc = validate_document(doc)
    _schema("rng" in doc, "document has no rng block to generate from", "rng")
    spec = dict(doc["rng"])
    if seed is not None:
        spec["seed"] = seed
    if bound is not None:
        spec["denominator_bound"] = bound
    rng = random.Random(spec["seed"])
    denominator_bound = spec["denominator_bound"]

    def draw() -> list[str]:
        return random_triplet(rng, denominator_bound).serialize()

    out = {key: value for key, value in doc.items() if key != "rng"}
    if doc["kind"] == "family":
        out["assignment"] = [
            {element: draw() for element in raw_set} for raw_set in doc["sets"]
        ]
    elif doc["kind"] == "tree":
        out["assignment"] = {node: draw() for node in doc["strings"]}
    else:
        family = ZornFamily(members=tuple(frozenset(m) for m in doc["members"]))
        out["fan_triplets"] = [
            {"member": member, "entry": entry, "triplet": draw()}
            for member, entry in zorn_mod.fan_pairs(family)
        ]
    return out


def family_choice(doc: dict) -> NeutroChoice:
    """Build the core choice object from a canonical family document."""
    family = SetFamily(sets=tuple(tuple(s) for s in doc["sets"]))
    triplets = {
        (i, element): parse_triplet(values)
        for i, table in enumerate(doc["assignment"])
        for element, values in table.items()
    }
    return build_choice(family, triplets)


def tree_choice(doc: dict, horizon_override: int | None = None) -> tree_mod.TreeChoice:
    """Build the core tree-choice object from a canonical tree document."""
    horizon = horizon_override if horizon_override is not None else doc["horizon"]
    built = tree_mod.build_tree(doc["strings"], horizon)
    triplets = {node: parse_triplet(values) for node, values in doc["assignment"].items()}
    return tree_mod.build_tree_choice(built, triplets)


def zorn_inputs(doc: dict) -> tuple[ZornFamily, dict]:
    """Build the family and fan-triplet table from a canonical zorn document."""
    family = ZornFamily(members=tuple(frozenset(m) for m in doc["members"]))
    table = {
        (record["member"], record["entry"]): parse_triplet(record["triplet"])
        for record in doc["fan_triplets"]
    }
    return family, table


def report_to_json(report: MaximalReport) -> dict:
    return {
        "maximal": list(report.maximal_indices),
        "successors": [
            {
                "member": base_index,
                "successor": entry.successor_index,
                "provenance": entry.provenance.value,
            }
            for base_index, entry in sorted(report.successors.items())
        ],
    }


def report_from_json(raw: Any) -> MaximalReport:
    _schema(isinstance(raw, dict), "report must be an object", "report")
    maximal = raw.get("maximal")
    successors = raw.get("successors")
    _schema(
        isinstance(maximal, list) and all(isinstance(i, int) for i in maximal),
        "report.maximal must list member indices",
        "report.maximal",
    )
    _schema(isinstance(successors, list), "report.successors must be a list", "report.successors")
    entries: dict[int, SuccessorEntry] = {}
    for i, record in enumerate(successors):
        _schema(isinstance(record, dict), f"successors[{i}] must be an object", f"report.successors[{i}]")
        member = record.get("member")
        successor = record.get("successor")
        provenance = record.get("provenance")
        _schema(
            isinstance(member, int) and isinstance(successor, int),
            f"successors[{i}] needs integer 'member' and 'successor'",
            f"report.successors[{i}]",
        )
        _schema(
            provenance in ("direct", "compensated"),
            f"successors[{i}].provenance must be 'direct' or 'compensated'",
            f"report.successors[{i}].provenance",
        )
        _schema(member not in entries, f"successors[{i}] duplicates member {member}", f"report.successors[{i}]")
        entries[member] = SuccessorEntry(
            successor_index=successor, provenance=Provenance(provenance)
        )
    return MaximalReport(maximal_indices=tuple(maximal), successors=entries)


def trace_to_json(trace: tree_mod.PathTrace) -> dict:
    return {
        "stages": [
            {
                "stage": stage.index,
                "node": stage.node,
                "kind": stage.kind.value,
                "compensator": stage.compensator,
            }
            for stage in trace.stages
        ],
        "final_path": trace.final_path,
    }


def plan_to_json(plan) -> dict:
    return {
        "pairs": [
            {
                "recipient_index": pair.recipient_index,
                "compensated": pair.compensated,
                "compensator": pair.compensator,
                "donor_index": pair.donor_index,
            }
            for pair in plan.pairs
        ],
        "marks": [{"set": index, "element": element} for index, element in plan.marks],
    }


def dumps_canonical(payload: dict) -> str:
    """Deterministic JSON rendering: sorted keys, fixed separators."""
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"
