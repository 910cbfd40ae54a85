"""Binary prefix trees and the staged horizon-path construction.

Nodes are binary strings; the empty string is the root and a node's level
is its length.  "Infinite" is modelled by a depth horizon: a node has a
full extension when some descendant reaches the horizon, and a path is a
root-to-horizon chain of nodes.

The path construction advances one level per stage.  A stage normally
enters the chosen candidate with the greatest choice probability; a stage
whose candidates are all unchosen (a dead step) may still advance by
consuming a compensator, either recorded behind the path (a lower-probability
chosen node beside a chosen ancestor) or ahead of it (the lower-probability
member of an incompatible chosen pair).  Compensators are marked and never
reused.  When the preferred move dead-ends deeper in the tree the
construction backtracks and tries the next move in preference order, so it
succeeds exactly when some compensated path to the horizon exists.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .errors import (
    DepthExceededError,
    EmptyTreeError,
    InsufficientBranchingError,
    MissingAssignmentError,
    NeutroChoiceError,
    NodeNotInTreeError,
    PreconditionViolatedError,
)
from .triplet import Triplet, Verdict, classify, make_triplet

ROOT = ""


def _check_bits(value: str) -> str:
    if not isinstance(value, str) or any(bit not in "01" for bit in value):
        raise ValueError(f"not a binary string: {value!r}")
    return value


class StringRelation(Enum):
    EQUAL = "equal"
    PREFIX_OF = "prefix_of"
    IMMEDIATE_SUCCESSOR_OF = "immediate_successor_of"
    EXTENDS = "extends"
    INCOMPATIBLE = "incompatible"


class StepKind(Enum):
    CHOSEN_MAX = "chosen_max"
    COMP_BACKWARD = "comp_backward"
    COMP_FORWARD = "comp_forward"


@dataclass(frozen=True)
class Tree:
    """Prefix-closed set of binary strings bounded by a depth horizon."""

    nodes: frozenset[str]
    horizon: int

    def levels(self) -> dict[int, list[str]]:
        """Nodes grouped by level, each group sorted lexicographically."""
        grouped: dict[int, list[str]] = {}
        for node in sorted(self.nodes, key=lambda n: (len(n), n)):
            grouped.setdefault(len(node), []).append(node)
        return grouped


@dataclass(frozen=True)
class TreeChoice:
    """A tree together with a total triplet assignment over its nodes."""

    tree: Tree
    assignment: dict

    def p_chosen(self, node: str):
        return self.assignment[node].p_chosen


@dataclass(frozen=True)
class Stage:
    index: int
    node: str
    kind: StepKind
    compensator: str | None


@dataclass(frozen=True)
class PathTrace:
    """Stage-by-stage record of one horizon path."""

    stages: tuple[Stage, ...]

    @property
    def final_path(self) -> str:
        return self.stages[-1].node


def build_tree(strings: Iterable[str], horizon: int) -> Tree:
    """Close the given strings under prefixes and bound them by the horizon."""
    if horizon < 1:
        raise ValueError(f"horizon must be a positive integer, got {horizon}")
    nodes = {ROOT}
    for raw in strings:
        s = _check_bits(raw)
        if len(s) > horizon:
            raise DepthExceededError(
                f"string {s!r} is longer than the horizon {horizon}", address=s
            )
        for cut in range(1, len(s) + 1):
            nodes.add(s[:cut])
    return Tree(nodes=frozenset(nodes), horizon=horizon)


def build_tree_choice(tree: Tree, triplets) -> TreeChoice:
    """Attach a validated, total triplet assignment to a tree."""
    assignment: dict = {}
    for node in sorted(tree.nodes, key=lambda n: (len(n), n)):
        if node not in triplets:
            raise MissingAssignmentError(
                f"no triplet assigned to node {node!r}", address=node
            )
        raw = triplets[node]
        components = raw.components() if isinstance(raw, Triplet) else raw
        try:
            assignment[node] = make_triplet(*components)
        except NeutroChoiceError as exc:
            raise type(exc)(f"node {node!r}: {exc}", address=node) from exc
    return TreeChoice(tree=tree, assignment=assignment)


def string_relation(sigma: str, tau: str) -> StringRelation:
    """Relate two binary strings; exactly one relation applies.

    ``IMMEDIATE_SUCCESSOR_OF`` means ``tau`` extends ``sigma`` by one bit and
    subsumes the prefix report for that case.
    """
    _check_bits(sigma)
    _check_bits(tau)
    if sigma == tau:
        return StringRelation.EQUAL
    if tau.startswith(sigma):
        if len(tau) == len(sigma) + 1:
            return StringRelation.IMMEDIATE_SUCCESSOR_OF
        return StringRelation.PREFIX_OF
    if sigma.startswith(tau):
        return StringRelation.EXTENDS
    return StringRelation.INCOMPATIBLE


def _require_node(tree: Tree, node: str) -> None:
    if node not in tree.nodes:
        raise NodeNotInTreeError(f"node {node!r} is not in the tree", address=node)


def backward_tracking(tree: Tree, node: str) -> set[str]:
    """All strict prefixes of ``node`` in the tree; one per lower level."""
    _require_node(tree, node)
    return {node[:cut] for cut in range(len(node))}


def forward_tracking(tree: Tree, node: str) -> set[str]:
    """All strict extensions of ``node`` in the tree."""
    _require_node(tree, node)
    return {other for other in tree.nodes if other != node and other.startswith(node)}


def dead_levels(tc: TreeChoice) -> list[int]:
    """Levels that contain nodes but no chosen node, ascending."""
    dead = []
    for lvl, nodes in sorted(tc.tree.levels().items()):
        if not any(classify(tc.assignment[n]) is Verdict.CHOSEN for n in nodes):
            dead.append(lvl)
    return dead


def extension_depth(tree: Tree, node: str) -> int:
    """Greatest level reachable from ``node`` (including the node itself)."""
    _require_node(tree, node)
    deepest = len(node)
    for other in tree.nodes:
        if other.startswith(node) and len(other) > deepest:
            deepest = len(other)
    return deepest


def _reach_depths(tree: Tree) -> dict[str, int]:
    """Greatest reachable level per node, computed bottom-up."""
    reach: dict[str, int] = {}
    for node in sorted(tree.nodes, key=len, reverse=True):
        reach[node] = max(
            [len(node)]
            + [reach[node + bit] for bit in "01" if node + bit in tree.nodes]
        )
    return reach


class _PathSearch:
    """Depth-first stage construction with compensator marking."""

    def __init__(self, tc: TreeChoice):
        self.tc = tc
        self.tree = tc.tree
        self.horizon = tc.tree.horizon
        self.reach = _reach_depths(tc.tree)
        self.by_level = tc.tree.levels()
        self.max_level = max(self.by_level) if self.by_level else 0
        self.marked: set[str] = set()
        self.stages: list[Stage] = []

    def is_chosen(self, node: str) -> bool:
        return classify(self.tc.assignment[node]) is Verdict.CHOSEN

    def pc(self, node: str):
        return self.tc.p_chosen(node)

    def candidates(self, current: str | None) -> list[str]:
        """Enterable nodes for the next stage: full-extension successors."""
        if current is None:
            return [ROOT] if self.reach.get(ROOT) == self.horizon else []
        return [
            current + bit
            for bit in "01"
            if current + bit in self.tree.nodes
            and self.reach[current + bit] == self.horizon
        ]

    def backward_compensators(self, current: str | None) -> list[str]:
        """Unmarked chosen nodes beside a chosen node already on the path.

        A candidate at level ``m`` qualifies when the path's own level-``m``
        node is chosen with a strictly greater choice probability; ties
        disqualify.  Ordered by level, then probability (descending), then
        lexicographically.
        """
        if current is None:
            return []
        found: list[str] = []
        for m in range(len(current) + 1):
            witness = current[:m]
            if not self.is_chosen(witness):
                continue
            bar = self.pc(witness)
            beside = [
                node
                for node in self.by_level.get(m, ())
                if node != witness
                and node not in self.marked
                and self.is_chosen(node)
                and self.pc(node) < bar
            ]
            beside.sort(key=lambda n: (-self.pc(n), n))
            found.extend(beside)
        return found

    def forward_moves(self, current: str | None, dead_level: int) -> list[tuple]:
        """Moves licensed by an incompatible chosen pair past the dead level.

        The pair's lower-probability member is consumed as the compensator
        and the stage advances toward the higher one.  Pairs are scanned by
        level, then lexicographically; equal-length distinct strings are
        always incompatible.
        """
        moves: list[tuple] = []
        seen: set[tuple] = set()
        base = current if current is not None else ROOT
        for m in range(dead_level + 1, self.max_level + 1):
            extensions = [
                node
                for node in self.by_level.get(m, ())
                if node != base and node.startswith(base) and self.is_chosen(node)
            ]
            for first, second in itertools.combinations(extensions, 2):
                low, high = sorted((first, second), key=lambda n: (self.pc(n), n))
                if low in self.marked:
                    continue
                if current is None:
                    slot = ROOT
                else:
                    slot = high[:dead_level]
                    if self.reach.get(slot) != self.horizon:
                        continue
                key = (slot, low)
                if key in seen:
                    continue
                seen.add(key)
                moves.append((slot, StepKind.COMP_FORWARD, low))
        return moves

    def moves(self, current: str | None) -> list[tuple]:
        slots = self.candidates(current)
        if not slots:
            return []
        chosen_slots = sorted(
            (s for s in slots if self.is_chosen(s)), key=lambda n: (-self.pc(n), n)
        )
        if chosen_slots:
            return [(s, StepKind.CHOSEN_MAX, None) for s in chosen_slots]
        dead_level = 0 if current is None else len(current) + 1
        ordered_slots = sorted(slots, key=lambda n: (-self.pc(n), n))
        moves = [
            (slot, StepKind.COMP_BACKWARD, compensator)
            for compensator in self.backward_compensators(current)
            for slot in ordered_slots
        ]
        moves.extend(self.forward_moves(current, dead_level))
        return moves

    def extend(self, current: str | None) -> bool:
        if current is not None and len(current) == self.horizon:
            return True
        for slot, kind, compensator in self.moves(current):
            self.stages.append(
                Stage(index=len(self.stages), node=slot, kind=kind, compensator=compensator)
            )
            if compensator is not None:
                self.marked.add(compensator)
            if self.extend(slot):
                return True
            if compensator is not None:
                self.marked.discard(compensator)
            self.stages.pop()
        return False


def construct_path(tc: TreeChoice) -> PathTrace:
    """Build a root-to-horizon path trace, compensating every dead step.

    Raises ``PreconditionViolatedError`` when no compensated path reaches
    the horizon (some dead step has neither a backward nor a forward
    compensator on every alternative).
    """
    if not tc.tree.nodes:
        raise EmptyTreeError("the tree has no nodes")
    if ROOT not in tc.tree.nodes:
        raise EmptyTreeError("the tree has no root")
    if tc.tree.horizon < 1:
        raise PreconditionViolatedError("horizon must be at least 1")
    search = _PathSearch(tc)
    if search.reach.get(ROOT, 0) < tc.tree.horizon:
        raise PreconditionViolatedError(
            f"no node reaches the horizon {tc.tree.horizon}"
        )
    if not search.extend(None):
        raise PreconditionViolatedError(
            "a dead step has no backward or forward compensator on any branch"
        )
    return PathTrace(stages=tuple(search.stages))


def enumerate_paths(tc: TreeChoice, count: int) -> list[PathTrace]:
    """Enumerate ``count`` horizon paths through chosen nodes only.

    Expands every chosen full-extension successor breadth-first, keeping
    each level in lexicographic order, so the returned paths are the
    ``count`` lexicographically least chosen paths.  Distinct horizon paths
    are pairwise incompatible past their common prefix.
    """
    if count < 1:
        raise ValueError(f"count must be positive, got {count}")
    if not tc.tree.nodes or ROOT not in tc.tree.nodes:
        raise EmptyTreeError("the tree has no root")
    horizon = tc.tree.horizon
    reach = _reach_depths(tc.tree)
    frontier = [ROOT] if reach.get(ROOT) == horizon else []
    for _ in range(horizon):
        grown: list[str] = []
        for node in frontier:
            grown.extend(
                child
                for child in (node + "0", node + "1")
                if child in tc.tree.nodes
                and reach[child] == horizon
                and classify(tc.assignment[child]) is Verdict.CHOSEN
            )
        frontier = sorted(grown)
    if len(frontier) < count:
        raise InsufficientBranchingError(
            f"only {len(frontier)} full-depth chosen paths exist, {count} requested"
        )
    traces = []
    for leaf in frontier[:count]:
        stages = tuple(
            Stage(index=s, node=leaf[:s], kind=StepKind.CHOSEN_MAX, compensator=None)
            for s in range(horizon + 1)
        )
        traces.append(PathTrace(stages=stages))
    return traces


def verify_trace(tc: TreeChoice, trace: PathTrace) -> bool:
    """Re-validate a path trace against the assignment alone.

    Checks the stage chain, horizon arrival, compensator marking
    exclusivity, per-kind eligibility of every compensator, and that every
    dead level of the tree was entered through a compensated stage.
    """
    tree = tc.tree
    horizon = tree.horizon
    stages = trace.stages
    if len(stages) != horizon + 1:
        return False
    reach = _reach_depths(tree)
    by_level = tree.levels()

    def chosen(node: str) -> bool:
        return classify(tc.assignment[node]) is Verdict.CHOSEN

    for s, stage in enumerate(stages):
        if stage.index != s or stage.node not in tree.nodes or len(stage.node) != s:
            return False
        if s > 0 and stage.node[:-1] != stages[s - 1].node:
            return False
        if reach[stage.node] != horizon:
            return False
    if len(stages[-1].node) != horizon:
        return False

    compensators = [st.compensator for st in stages if st.compensator is not None]
    if len(compensators) != len(set(compensators)):
        return False

    for s, stage in enumerate(stages):
        parent = stages[s - 1].node if s > 0 else None
        siblings = (
            [stage.node]
            if parent is None
            else [
                parent + bit
                for bit in "01"
                if parent + bit in tree.nodes and reach[parent + bit] == horizon
            ]
        )
        any_chosen = any(chosen(n) for n in siblings)
        if stage.kind is StepKind.CHOSEN_MAX:
            if stage.compensator is not None or not chosen(stage.node):
                return False
            continue
        # Compensated stages require a genuinely dead step.
        if any_chosen or stage.compensator is None:
            return False
        comp = stage.compensator
        if comp not in tree.nodes or not chosen(comp):
            return False
        if stage.kind is StepKind.COMP_BACKWARD:
            m = len(comp)
            if m >= s or parent is None:
                return False
            witness = stage.node[:m]
            if not chosen(witness) or not tc.p_chosen(comp) < tc.p_chosen(witness):
                return False
        elif stage.kind is StepKind.COMP_FORWARD:
            if len(comp) <= s:
                return False
            base = parent if parent is not None else ROOT
            if comp == base or not comp.startswith(base):
                return False
            partner_found = False
            for other in by_level.get(len(comp), ()):
                if other == comp or other == base or not other.startswith(base):
                    continue
                if not chosen(other):
                    continue
                low, _high = sorted((comp, other), key=lambda n: (tc.p_chosen(n), n))
                if low != comp:
                    continue
                if parent is not None and other[: len(stage.node)] != stage.node:
                    continue
                partner_found = True
                break
            if not partner_found:
                return False
        else:
            return False

    # every dead level at or below the horizon must be compensated through
    for lvl in dead_levels(tc):
        if lvl > horizon:
            continue
        if stages[lvl].kind is StepKind.CHOSEN_MAX:
            return False
    # backward-compensation budget: never more than 2^l uses at level l
    backward_at = {}
    for stage in stages:
        if stage.kind is StepKind.COMP_BACKWARD:
            backward_at[len(stage.node)] = backward_at.get(len(stage.node), 0) + 1
    return all(count <= 2**lvl for lvl, count in backward_at.items())
