"""Triplet-valued choice over finite families of sets.

Covers per-set verdict partitions, the embedding of classical choice maps,
the compensation check and allocation discipline, and the product-status
verdict.  Elements are opaque identifiers addressed by ``(set index,
element)``; the order elements were listed in is the canonical order used
by every deterministic tie-break.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Hashable, Mapping

from .errors import (
    IndexOutOfRangeError,
    InvalidChoiceError,
    MissingAssignmentError,
    NeutroChoiceError,
    PreconditionViolatedError,
)
from .triplet import Triplet, Verdict, classify, make_triplet

Element = Hashable

# Canonical embedding triplets for classical choice maps: the picked element
# gets a choice-dominant triplet, every other element a rejection-dominant one.
_EMBED_CHOSEN = ("7/10", "2/10", "1/10")
_EMBED_OTHER = ("2/10", "7/10", "1/10")


@dataclass(frozen=True)
class SetFamily:
    """Ordered family of non-empty finite sets of opaque identifiers.

    The same identifier may appear in different sets; each occurrence is a
    distinct element addressed by its ``(set index, identifier)`` pair.
    """

    sets: tuple[tuple[Element, ...], ...]

    def __post_init__(self) -> None:
        normalized = tuple(tuple(xs) for xs in self.sets)
        object.__setattr__(self, "sets", normalized)
        for index, xs in enumerate(normalized):
            if not xs:
                raise ValueError(f"set {index} is empty")
            if len(set(xs)) != len(xs):
                raise ValueError(f"set {index} lists a duplicate element")

    def __len__(self) -> int:
        return len(self.sets)

    def positions(self, index: int) -> dict[Element, int]:
        return {element: pos for pos, element in enumerate(self.sets[index])}


@dataclass(frozen=True)
class NeutroChoice:
    """A set family together with a total triplet assignment."""

    family: SetFamily
    assignment: dict

    def triplet(self, index: int, element: Element) -> Triplet:
        return self.assignment[(index, element)]


@dataclass(frozen=True)
class Partition:
    """Verdict partition of one set: parts are disjoint and cover the set."""

    chosen: tuple[Element, ...]
    not_chosen: tuple[Element, ...]
    indeterminate: tuple[Element, ...]


@dataclass(frozen=True)
class CompensationReport:
    holds: bool
    uncompensatable: tuple[int, ...]


@dataclass(frozen=True)
class CompensationPair:
    """One empty-choice set served by one donor element."""

    recipient_index: int
    compensated: Element
    donor_index: int
    compensator: Element


@dataclass(frozen=True)
class CompensationPlan:
    pairs: tuple[CompensationPair, ...]
    marks: tuple[tuple[int, Element], ...]


class ProductStatusKind(Enum):
    NON_EMPTY_WITNESS = "non_empty_witness"
    INDETERMINATE = "indeterminate"
    NO_WITNESS = "no_witness"


@dataclass(frozen=True)
class ProductStatus:
    """Status of the family's product under the assignment's verdicts."""

    kind: ProductStatusKind
    witness: tuple[Element, ...] | None = None


def build_choice(family: SetFamily, triplets: Mapping) -> NeutroChoice:
    """Build a choice assignment, validating totality and every triplet.

    ``triplets`` maps ``(set index, element)`` to a Triplet or to a raw
    three-component sequence; raw values are validated as if constructed
    fresh, and any validation error is re-raised tagged with the offending
    element's address.
    """
    assignment: dict = {}
    for index, xs in enumerate(family.sets):
        for element in xs:
            key = (index, element)
            if key not in triplets:
                raise MissingAssignmentError(
                    f"no triplet assigned to element {element!r} in set {index}",
                    address=f"set {index}, element {element!r}",
                )
            raw = triplets[key]
            components = raw.components() if isinstance(raw, Triplet) else raw
            try:
                assignment[key] = make_triplet(*components)
            except NeutroChoiceError as exc:
                raise type(exc)(
                    f"element {element!r} in set {index}: {exc}",
                    address=f"set {index}, element {element!r}",
                ) from exc
    return NeutroChoice(family=family, assignment=assignment)


def partition_set(choice: NeutroChoice, index: int) -> Partition:
    """Split set ``index`` into chosen / not chosen / indeterminate parts."""
    if not 0 <= index < len(choice.family):
        raise IndexOutOfRangeError(f"set index {index} out of range")
    parts: dict[Verdict, list[Element]] = {v: [] for v in Verdict}
    for element in choice.family.sets[index]:
        parts[classify(choice.triplet(index, element))].append(element)
    return Partition(
        chosen=tuple(parts[Verdict.CHOSEN]),
        not_chosen=tuple(parts[Verdict.NOT_CHOSEN]),
        indeterminate=tuple(parts[Verdict.INDETERMINATE]),
    )


def embed_classical(family: SetFamily, choice_map: Mapping[int, Element]) -> NeutroChoice:
    """Embed a classical choice map as a triplet assignment.

    The picked element of each set becomes its unique chosen element; every
    other element is rejection-dominant, so partitioning recovers the map.
    """
    triplets: dict = {}
    for index, xs in enumerate(family.sets):
        if index not in choice_map:
            raise InvalidChoiceError(f"choice map picks nothing from set {index}")
        picked = choice_map[index]
        if picked not in xs:
            raise InvalidChoiceError(
                f"choice map picks {picked!r}, which is not in set {index}"
            )
        for element in xs:
            values = _EMBED_CHOSEN if element == picked else _EMBED_OTHER
            triplets[(index, element)] = make_triplet(*values)
    return build_choice(family, triplets)


def _chosen_parts(choice: NeutroChoice) -> list[Partition]:
    return [partition_set(choice, i) for i in range(len(choice.family))]


def check_compensation(choice: NeutroChoice) -> CompensationReport:
    """Decide whether every empty-choice set can be served one-for-one.

    Donors are sets with at least two chosen elements; each donor keeps its
    top chosen element and offers the rest.  The property holds when the
    pool covers all empty-choice sets under that discipline; recipients a
    depleted pool cannot reach are reported in processing order.
    """
    parts = _chosen_parts(choice)
    empty = [i for i, part in enumerate(parts) if not part.chosen]
    capacity = sum(len(part.chosen) - 1 for part in parts if len(part.chosen) >= 2)
    if len(empty) <= capacity:
        return CompensationReport(holds=True, uncompensatable=())
    return CompensationReport(holds=False, uncompensatable=tuple(empty[capacity:]))


def allocate_compensators(choice: NeutroChoice) -> CompensationPlan:
    """Pair every empty-choice set with a donor element, marking as it goes.

    Within each donor the top chosen element (by choice probability, ties by
    canonical order) is marked first and never compensates.  Empty-choice
    sets are processed in index order; each receives its most-nearly-chosen
    element paired with the best unmarked donor element (highest choice
    probability, ties by donor index then canonical order), which is then
    marked against reuse.
    """
    report = check_compensation(choice)
    if not report.holds:
        raise PreconditionViolatedError(
            f"compensation property fails; uncompensatable sets: "
            f"{list(report.uncompensatable)}"
        )
    family = choice.family
    parts = _chosen_parts(choice)
    marks: list[tuple[int, Element]] = []
    # pool entries: (choice probability, donor index, canonical position, element)
    pool: list[tuple] = []
    for donor, part in enumerate(parts):
        if len(part.chosen) < 2:
            continue
        pos = family.positions(donor)
        top = max(part.chosen, key=lambda e: (choice.triplet(donor, e).p_chosen, -pos[e]))
        marks.append((donor, top))
        for element in part.chosen:
            if element != top:
                pool.append(
                    (choice.triplet(donor, element).p_chosen, donor, pos[element], element)
                )
    pairs: list[CompensationPair] = []
    for recipient, part in enumerate(parts):
        if part.chosen:
            continue
        pos = family.positions(recipient)
        compensated = max(
            family.sets[recipient],
            key=lambda e: (choice.triplet(recipient, e).p_chosen, -pos[e]),
        )
        best = max(pool, key=lambda entry: (entry[0], -entry[1], -entry[2]))
        pool.remove(best)
        _, donor, _, compensator = best
        marks.append((donor, compensator))
        pairs.append(
            CompensationPair(
                recipient_index=recipient,
                compensated=compensated,
                donor_index=donor,
                compensator=compensator,
            )
        )
    return CompensationPlan(pairs=tuple(pairs), marks=tuple(marks))


def verify_plan(choice: NeutroChoice, plan: CompensationPlan) -> bool:
    """Re-validate a compensation plan against the assignment from scratch."""
    family = choice.family
    parts = _chosen_parts(choice)
    empty = [i for i, part in enumerate(parts) if not part.chosen]
    if sorted(pair.recipient_index for pair in plan.pairs) != empty:
        return False
    used: set[tuple[int, Element]] = set()
    for pair in plan.pairs:
        if pair.donor_index == pair.recipient_index:
            return False
        if not 0 <= pair.donor_index < len(family):
            return False
        donor_part = parts[pair.donor_index]
        if len(donor_part.chosen) < 2:
            return False
        if pair.compensator not in donor_part.chosen:
            return False
        if pair.compensated not in family.sets[pair.recipient_index]:
            return False
        pos = family.positions(pair.donor_index)
        top = max(
            donor_part.chosen,
            key=lambda e: (choice.triplet(pair.donor_index, e).p_chosen, -pos[e]),
        )
        if pair.compensator == top:
            return False
        key = (pair.donor_index, pair.compensator)
        if key in used:
            return False
        used.add(key)
    return True


def product_status(choice: NeutroChoice) -> ProductStatus:
    """Report whether a one-element-per-set witness tuple exists.

    A witness exists when every set has a chosen element (the component with
    the greatest choice probability, ties by canonical order).  With no
    witness, a set whose elements are all indeterminate makes the whole
    product indeterminate; otherwise there is simply no witness.
    """
    parts = _chosen_parts(choice)
    if all(part.chosen for part in parts):
        witness = []
        for index, part in enumerate(parts):
            pos = choice.family.positions(index)
            witness.append(
                max(part.chosen, key=lambda e: (choice.triplet(index, e).p_chosen, -pos[e]))
            )
        return ProductStatus(kind=ProductStatusKind.NON_EMPTY_WITNESS, witness=tuple(witness))
    for index, part in enumerate(parts):
        if len(part.indeterminate) == len(choice.family.sets[index]):
            return ProductStatus(kind=ProductStatusKind.INDETERMINATE)
    return ProductStatus(kind=ProductStatusKind.NO_WITNESS)
