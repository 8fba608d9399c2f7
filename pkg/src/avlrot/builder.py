"""Promotion-only rebuild planning.

Any valid tree can be rebuilt by plain inserts that fire only
promotions: never a rotation, never a demotion.  The insertion order
comes from peeling the target into levels.  Level j holds the keys of
the rank-j nodes; levels are emitted from the root's rank down to 0,
and within a level each node's subtree is visited lower-rank child
first (ties go left).  Inserting level by level grows the tree through
its own truncations, and each level raises the root's rank exactly
once.
"""

from __future__ import annotations

from dataclasses import dataclass

from avlrot.core import RebalanceCounters, Tree
from avlrot.errors import InvalidTargetError

NIL = -1


@dataclass(frozen=True)
class InsertionPlan:
    """Insertion order that rebuilds ``target`` with promotions only.

    ``sequence`` is a permutation of the target's keys.
    ``level_boundaries`` has one more entry than there are levels;
    ``sequence[level_boundaries[i]:level_boundaries[i + 1]]`` is the
    i-th emitted level, highest rank first.
    """

    target: Tree
    sequence: tuple[int, ...]
    level_boundaries: tuple[int, ...]

    def levels(self) -> tuple[tuple[int, ...], ...]:
        b = self.level_boundaries
        return tuple(
            self.sequence[b[i]: b[i + 1]] for i in range(len(b) - 1)
        )


def insertion_sequence(target: Tree) -> InsertionPlan:
    """Plan for ``target``; raises InvalidTargetError if it fails validation."""
    report = target.validate()
    if not report.ok:
        raise InvalidTargetError(report)
    keys, ranks, lefts, rights, root = target._k.snapshot()
    if root == NIL:
        return InsertionPlan(target, (), (0,))
    top = ranks[root]
    by_rank: list[list[int]] = [[] for _ in range(top + 1)]
    # One walk fixes the order for every level: pruning the levels below
    # rank j does not reorder the surviving nodes, so the arrival order
    # of the rank-j nodes here equals their visit order after peeling.
    stack = [root]
    while stack:
        i = stack.pop()
        by_rank[ranks[i]].append(keys[i])
        l, r = lefts[i], rights[i]
        rl = ranks[l] if l != NIL else -1
        rr = ranks[r] if r != NIL else -1
        first, second = (l, r) if rl <= rr else (r, l)
        if second != NIL:
            stack.append(second)
        if first != NIL:
            stack.append(first)
    sequence: list[int] = []
    boundaries = [0]
    for level in range(top, -1, -1):
        sequence.extend(by_rank[level])
        boundaries.append(len(sequence))
    return InsertionPlan(target, tuple(sequence), tuple(boundaries))


def build_from_plan(plan: InsertionPlan) -> tuple[Tree, RebalanceCounters]:
    """Run the plan on a fresh tree; returns it with summed counters."""
    tree = Tree(backend=plan.target.backend)
    total = RebalanceCounters()
    for key in plan.sequence:
        counters, _ = tree.insert(key)
        total = total + counters
    return tree, total


@dataclass(frozen=True)
class RebuildReport:
    """Everything verify_promotion_only measured.

    ``level_matches[i]`` says the working tree equalled the matching
    truncation of the target right after the i-th level finished;
    ``root_rank_bumps[i]`` counts the inserts in that level that raised
    the root's rank (each level should contribute exactly one).
    """

    plan: InsertionPlan
    counters: RebalanceCounters
    matches_target: bool
    level_matches: tuple[bool, ...]
    root_rank_bumps: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return (
            self.matches_target
            and all(self.level_matches)
            and self.counters.single_rotations == 0
            and self.counters.double_rotations == 0
            and self.counters.demotions == 0
        )


def verify_promotion_only(target: Tree) -> RebuildReport:
    """Replay the plan and check every claim it makes.

    The rebuilt tree must equal the target, the run must be free of
    rotations and demotions, and each level prefix must reproduce the
    corresponding truncation of the target.
    """
    plan = insertion_sequence(target)
    truncations = [target]
    while len(truncations[-1]) > 0:
        truncations.append(truncations[-1].truncate())
    # truncations[j] drops everything below rank j; the plan's levels
    # arrive highest rank first, so after the i-th level the tree should
    # equal truncations[levels - 1 - i].
    tree = Tree(backend=target.backend)
    total = RebalanceCounters()
    levels = plan.levels()
    level_matches: list[bool] = []
    bumps: list[int] = []
    for i, level in enumerate(levels):
        bump = 0
        for key in level:
            before = tree.rank
            counters, _ = tree.insert(key)
            total = total + counters
            if tree.rank > before:
                bump += 1
        bumps.append(bump)
        level_matches.append(tree.structurally_equal(truncations[len(levels) - 1 - i]))
    return RebuildReport(
        plan=plan,
        counters=total,
        matches_target=tree.structurally_equal(target),
        level_matches=tuple(level_matches),
        root_rank_bumps=tuple(bumps),
    )
