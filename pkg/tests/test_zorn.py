from __future__ import annotations

import random

import pytest

from neutrochoice import (
    CompensationExhaustedError,
    MissingAssignmentError,
    NotAMemberError,
    Provenance,
    SetFamily,
    SuccessorEntry,
    ZornFamily,
    allocate_compensators,
    build_choice,
    check_chain_closed,
    find_maximal,
    partition_set,
    superset_fan,
    verify_report,
)
from oracles import (
    brute_maximal_indices,
    sample_zorn_instance,
    split_pool,
    triplet_pool,
    zorn_compensation_feasible,
)

CHOSEN_HI = ("6/10", "3/10", "1/10")
CHOSEN_LO = ("5/10", "3/10", "2/10")
NOT_CHOSEN = ("1/10", "7/10", "2/10")


def diamond_family() -> ZornFamily:
    return ZornFamily(
        members=(frozenset(), frozenset("1"), frozenset("2"), frozenset("12"))
    )


def all_chosen_table(family: ZornFamily) -> dict:
    table = {}
    for i, base in enumerate(family.members):
        for j, other in enumerate(family.members):
            if base < other:
                table[(i, j)] = CHOSEN_HI if (i + j) % 2 else CHOSEN_LO
    return table


def test_family_rejects_duplicate_members():
    with pytest.raises(ValueError):
        ZornFamily(members=(frozenset("a"), frozenset("a")))


def test_check_chain_closed():
    assert check_chain_closed(diamond_family())
    assert check_chain_closed(ZornFamily(members=(frozenset(),)))
    assert not check_chain_closed(
        ZornFamily(members=(frozenset("1"), frozenset("12")))
    )


def test_superset_fan():
    family = ZornFamily(members=(frozenset(), frozenset("1"), frozenset("12")))
    fan = superset_fan(family, frozenset("1"))
    assert fan.entries(family) == (frozenset("12"),)
    assert superset_fan(family, frozenset("12")).entry_indices == ()
    assert superset_fan(family, frozenset()).entry_indices == (1, 2)
    with pytest.raises(NotAMemberError):
        superset_fan(family, frozenset("9"))


def test_find_maximal_all_chosen():
    family = diamond_family()
    report = find_maximal(family, all_chosen_table(family))
    assert report.maximal_members(family) == (frozenset("12"),)
    assert set(report.successors) == {0, 1, 2}
    assert all(
        entry.provenance is Provenance.DIRECT for entry in report.successors.values()
    )
    for base_index, entry in report.successors.items():
        assert family.members[base_index] < family.members[entry.successor_index]
    assert verify_report(family, report)


def test_find_maximal_singleton():
    family = ZornFamily(members=(frozenset("1"),))
    report = find_maximal(family, {})
    assert report.maximal_indices == (0,)
    assert report.successors == {}
    assert verify_report(family, report)


def test_find_maximal_requires_total_table():
    family = diamond_family()
    table = all_chosen_table(family)
    table.pop((0, 1))
    with pytest.raises(MissingAssignmentError):
        find_maximal(family, table)


def test_find_maximal_compensates_starved_fan():
    # the fan of {1} contains only {1,2} and rejects it, so the successor
    # must be borrowed: the unmarked chosen entry {1,2} seen from the fan
    # of the empty set still strictly contains {1}
    family = diamond_family()
    table = {
        (0, 1): CHOSEN_LO,
        (0, 2): ("8/20", "7/20", "5/20"),
        (0, 3): CHOSEN_HI,
        (1, 3): NOT_CHOSEN,
        (2, 3): NOT_CHOSEN,
    }
    # the empty set's fan marks its top ({1,2}, probability 6/10); entries
    # {1} and {2} stay unmarked, but neither contains {1}, so the pending
    # member must wait for... no other donor exists: expect exhaustion
    with pytest.raises(CompensationExhaustedError):
        find_maximal(family, table)


def test_find_maximal_compensated_provenance():
    # give the empty set's fan two chosen supersets of {1}: the top one is
    # reserved as the empty set's own successor, the other compensates {1}
    family = ZornFamily(
        members=(frozenset(), frozenset("1"), frozenset("12"), frozenset("13"))
    )
    table = {
        (0, 1): ("3/10", "5/10", "2/10"),
        (0, 2): CHOSEN_HI,
        (0, 3): CHOSEN_LO,
        (1, 2): NOT_CHOSEN,
        (1, 3): NOT_CHOSEN,
    }
    report = find_maximal(family, table)
    entry = report.successors[1]
    assert entry.provenance is Provenance.COMPENSATED
    assert entry.successor_index == 3  # index 2 is marked as the fan top
    assert family.members[1] < family.members[entry.successor_index]
    assert verify_report(family, report)


def test_find_maximal_exhaustion_names_the_starved_member():
    family = ZornFamily(members=(frozenset(), frozenset("1")))
    table = {(0, 1): NOT_CHOSEN}
    with pytest.raises(CompensationExhaustedError) as info:
        find_maximal(family, table)
    assert "0" in str(info.value)


def test_verify_report_rejects_false_maximal_claim():
    family = ZornFamily(members=(frozenset("1"), frozenset("12")))
    bad = find_maximal(
        family, {(0, 1): CHOSEN_HI}
    ).__class__(maximal_indices=(0,), successors={})
    assert not verify_report(family, bad)


def test_verify_report_rejects_duplicate_compensator():
    family = ZornFamily(
        members=(frozenset(), frozenset("1"), frozenset("2"), frozenset("12"))
    )
    report = find_maximal(family, all_chosen_table(family))
    forged = report.__class__(
        maximal_indices=report.maximal_indices,
        successors={
            0: SuccessorEntry(successor_index=3, provenance=Provenance.COMPENSATED),
            1: SuccessorEntry(successor_index=3, provenance=Provenance.COMPENSATED),
            2: SuccessorEntry(successor_index=3, provenance=Provenance.DIRECT),
        },
    )
    assert not verify_report(family, forged)


def test_verify_report_rejects_non_superset_successor():
    family = ZornFamily(members=(frozenset("1"), frozenset("2"), frozenset("12")))
    forged = find_maximal(
        family, {(0, 2): CHOSEN_HI, (1, 2): CHOSEN_LO}
    ).__class__(
        maximal_indices=(2,),
        successors={0: SuccessorEntry(successor_index=1, provenance=Provenance.DIRECT)},
    )
    assert not verify_report(family, forged)


def test_find_maximal_matches_brute_force_fuzz():
    rng = random.Random(4242)
    groups = split_pool(triplet_pool(6))
    checked = 0
    compensated = 0
    while checked < 60:
        family, table = sample_zorn_instance(rng, groups)
        if not zorn_compensation_feasible(family, table):
            with pytest.raises(CompensationExhaustedError):
                find_maximal(family, table)
            continue
        report = find_maximal(family, table)
        checked += 1
        assert report.maximal_indices == brute_maximal_indices(family)
        assert verify_report(family, report)
        for base_index, entry in report.successors.items():
            assert family.members[base_index] < family.members[entry.successor_index]
        if any(
            entry.provenance is Provenance.COMPENSATED
            for entry in report.successors.values()
        ):
            compensated += 1
    assert compensated > 0


def test_find_maximal_terminates_on_inclusion_chain():
    # chain of ten nested members with every fan rejecting everything except
    # the fan of the empty set, which must feed compensators to all of them
    elements = "abcdefghij"
    members = tuple(frozenset(elements[:size]) for size in range(10))
    family = ZornFamily(members=members)
    table = {}
    for i, base in enumerate(family.members):
        for j, other in enumerate(family.members):
            if base < other:
                table[(i, j)] = CHOSEN_HI if i == 0 else NOT_CHOSEN
    # fan of the empty set has nine chosen entries; its top is reserved, so
    # eight compensators remain for eight pending members: just enough
    report = find_maximal(family, table)
    assert report.maximal_indices == (9,)
    assert verify_report(family, report)
    compensated = [
        entry
        for entry in report.successors.values()
        if entry.provenance is Provenance.COMPENSATED
    ]
    assert len(compensated) == 8


def test_compensator_selection_avoids_starving_later_members():
    # {x} prefers the higher-probability compensator {x,y}, but {x,y} is the
    # only candidate that contains {y}; the allocator must leave it alone
    # and hand {x} the lower-probability {x,z} instead
    family = ZornFamily(
        members=(
            frozenset(),
            frozenset("x"),
            frozenset("y"),
            frozenset({"x", "z"}),
            frozenset({"x", "y"}),
        )
    )
    table = {
        (0, 1): CHOSEN_HI,
        (0, 2): NOT_CHOSEN,
        (0, 3): ("8/20", "7/20", "5/20"),
        (0, 4): CHOSEN_LO,
        (1, 3): NOT_CHOSEN,
        (1, 4): NOT_CHOSEN,
        (2, 4): NOT_CHOSEN,
    }
    report = find_maximal(family, table)
    assert report.successors[1].successor_index == 3
    assert report.successors[1].provenance is Provenance.COMPENSATED
    assert report.successors[2].successor_index == 4
    assert report.successors[2].provenance is Provenance.COMPENSATED
    assert verify_report(family, report)


def test_fan_selection_agrees_with_family_discipline():
    # one fan viewed as a one-set family: the fan's top chosen entry (the
    # direct successor, marked) must coincide with the donor top that the
    # family allocator reserves, and the leftover chosen entries coincide
    # with the allocator's compensator pool
    family = ZornFamily(
        members=(frozenset(), frozenset("1"), frozenset("12"), frozenset("13"))
    )
    table = {
        (0, 1): CHOSEN_LO,
        (0, 2): CHOSEN_HI,
        (0, 3): ("8/20", "7/20", "5/20"),
        (1, 2): NOT_CHOSEN,
        (1, 3): NOT_CHOSEN,
    }
    fan = superset_fan(family, frozenset())
    labels = [str(i) for i in fan.entry_indices]
    mirror = build_choice(
        SetFamily(sets=(tuple(labels),)),
        {(0, str(i)): table[(0, i)] for i in fan.entry_indices},
    )
    part = partition_set(mirror, 0)
    assert part.chosen == ("1", "2", "3")

    report = find_maximal(family, table)
    direct = report.successors[0]
    assert direct.provenance is Provenance.DIRECT
    assert direct.successor_index == 2  # top choice probability in the fan

    # the family allocator reserves the same top element of the mirrored set
    two_set = SetFamily(sets=(tuple(labels), ("w",)))
    mirrored_choice = build_choice(
        two_set,
        {
            (0, str(i)): table[(0, i)] for i in fan.entry_indices
        }
        | {(1, "w"): NOT_CHOSEN},
    )
    plan = allocate_compensators(mirrored_choice)
    assert (0, "2") in plan.marks  # reserved top, never a compensator
    assert plan.pairs[0].compensator in {"1", "3"}
