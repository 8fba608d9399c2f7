"""The expensive family: trees whose deletions pay maximal rotations.

A member of even rank k + 2 nests two members of rank k around a
filler subtree B of rank k - 1 (one rank below its sibling A; raising
B to A's rank breaks every cost identity, see the tests).  Two mirror
layouts exist:

* type L: root x, left child y one rank below x; y holds A (1-child)
  and B (2-child); x's right subtree is C (2-child).
* type R: the mirror image; the root holds A on the left as a 2-child
  and a 1-child x on the right, with B (2-child) and C (1-child) under x.

A and C are themselves members; A copies the parent's type and C takes
the opposite one, so the family alternates as it nests.  The rank-0
member is a single node.

Deleting the shallow leaf (the leaf the chain of 2-children leads to)
costs exactly k/2 single rotations and drops the rank to k - 1;
reinserting the same key costs exactly k promotions and lands back in
the family with the type flipped.  Driving such delete/reinsert pairs
repeatedly cycles through 2**(k/2) distinct trees.

Shapes are composed out of memoized numpy arrays in in-order layout,
so building even the large members is a handful of array copies; keys
are always 1..n by in-order position.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Optional

import numpy as np

from avlrot.cases import Case
from avlrot.core import RebalanceCounters, Tree
from avlrot.errors import (
    CapExceededError,
    NotExpensiveError,
    OddRankError,
    VerificationError,
)

NIL = -1


class EType(Enum):
    L = "L"
    R = "R"

    @property
    def opposite(self) -> "EType":
        return EType.R if self is EType.L else EType.L


class BPolicy(Enum):
    """How the filler subtrees B are instantiated."""

    MINIMAL = "minimal"
    PERFECT = "perfect"


# -- shape composition ----------------------------------------------------


@dataclass(frozen=True)
class _Shape:
    """Immutable node arrays in in-order layout (node i = i-th key)."""

    ranks: np.ndarray
    lefts: np.ndarray
    rights: np.ndarray
    root: int

    def __len__(self) -> int:
        return len(self.ranks)


_EMPTY = _Shape(
    np.empty(0, np.int64), np.empty(0, np.int64), np.empty(0, np.int64), NIL
)


def _shift(arr: np.ndarray, off: int) -> np.ndarray:
    return np.where(arr >= 0, arr + off, NIL)


def _join(left: _Shape, rank: int, right: _Shape) -> _Shape:
    """New root of ``rank`` over two shapes; in-order layout preserved."""
    nl = len(left)
    off = nl + 1
    ranks = np.concatenate((left.ranks, [rank], right.ranks))
    lefts = np.concatenate(
        (left.lefts, [left.root], _shift(right.lefts, off))
    )
    rights = np.concatenate(
        (
            left.rights,
            [right.root + off if right.root != NIL else NIL],
            _shift(right.rights, off),
        )
    )
    return _Shape(ranks, lefts, rights, nl)


@lru_cache(maxsize=None)
def _min_shape(rank: int) -> _Shape:
    """Fewest-nodes tree of the given rank; taller subtree on the left."""
    if rank == -1:
        return _EMPTY
    if rank == 0:
        return _join(_EMPTY, 0, _EMPTY)
    return _join(_min_shape(rank - 1), rank, _min_shape(rank - 2))


@lru_cache(maxsize=None)
def _perfect_shape(rank: int) -> _Shape:
    if rank == -1:
        return _EMPTY
    return _join(_perfect_shape(rank - 1), rank, _perfect_shape(rank - 1))


def _b_shape(rank: int, policy: BPolicy) -> _Shape:
    return _min_shape(rank) if policy is BPolicy.MINIMAL else _perfect_shape(rank)


@lru_cache(maxsize=None)
def _expensive_shape(rank: int, etype: EType, policy: BPolicy) -> _Shape:
    if rank == 0:
        return _min_shape(0)
    k = rank - 2
    a = _expensive_shape(k, etype, policy)
    c = _expensive_shape(k, etype.opposite, policy)
    b = _b_shape(k - 1, policy)
    if etype is EType.L:
        return _join(_join(a, k + 1, b), k + 2, c)
    return _join(a, k + 2, _join(b, k + 1, c))


def gen_expensive(
    rank: int,
    etype: EType = EType.L,
    b_policy: BPolicy = BPolicy.MINIMAL,
    backend: Optional[str] = None,
) -> Tree:
    """Member of the family at the given even rank, keys 1..n in order."""
    if rank < 0 or rank % 2:
        raise OddRankError(f"members exist at even ranks >= 0, got {rank}")
    shape = _expensive_shape(rank, etype, b_policy)
    n = len(shape)
    return Tree.from_arrays(
        shape.ranks,
        shape.lefts,
        shape.rights,
        shape.root,
        keys=np.arange(1, n + 1, dtype=np.int64),
        backend=backend,
    )


def min_avl(rank: int, backend: Optional[str] = None) -> Tree:
    """Fewest-nodes tree of ``rank`` (>= -1), keys 1..n in order."""
    if rank < -1:
        raise ValueError(f"rank must be >= -1, got {rank}")
    shape = _min_shape(rank)
    n = len(shape)
    return Tree.from_arrays(
        shape.ranks,
        shape.lefts,
        shape.rights,
        shape.root,
        keys=np.arange(1, n + 1, dtype=np.int64),
        backend=backend,
    )


def perfect_avl(rank: int, backend: Optional[str] = None) -> Tree:
    """Perfect tree of ``rank`` (>= -1), keys 1..n in order."""
    if rank < -1:
        raise ValueError(f"rank must be >= -1, got {rank}")
    shape = _perfect_shape(rank)
    n = len(shape)
    return Tree.from_arrays(
        shape.ranks,
        shape.lefts,
        shape.rights,
        shape.root,
        keys=np.arange(1, n + 1, dtype=np.int64),
        backend=backend,
    )


def min_avl_size(rank: int) -> int:
    """Node count of min_avl(rank): 1 + size(r-1) + size(r-2)."""
    if rank < -1:
        raise ValueError(f"rank must be >= -1, got {rank}")
    a, b = 0, 1  # sizes at ranks -1 and 0
    if rank == -1:
        return 0
    for _ in range(rank):
        a, b = b, 1 + a + b
    return b


def _b_size(rank: int, policy: BPolicy) -> int:
    if policy is BPolicy.MINIMAL:
        return min_avl_size(rank)
    return (1 << (rank + 1)) - 1 if rank >= 0 else 0


def expensive_size(rank: int, b_policy: BPolicy = BPolicy.MINIMAL) -> int:
    """Node count of a member: n(k) = 2 n(k-2) + size_B(k-3) + 2."""
    if rank < 0 or rank % 2:
        raise OddRankError(f"members exist at even ranks >= 0, got {rank}")
    if rank == 0:
        return 1
    return 2 * expensive_size(rank - 2, b_policy) + _b_size(rank - 3, b_policy) + 2


# -- classification --------------------------------------------------------


@dataclass(frozen=True)
class EClassification:
    """Membership verdict for a subtree.

    ``children`` holds the verdicts for the nested A and C whenever the
    rank/shape skeleton matched, even if a nested check failed; ``etype``
    is set only for members above rank 0.
    """

    member: bool
    etype: Optional[EType] = None
    children: Optional[tuple["EClassification", "EClassification"]] = None


_NON_MEMBER = EClassification(member=False)


def classify_expensive(tree: Tree) -> EClassification:
    """Decide membership by walking only the family skeleton.

    Assumes the tree itself is valid (run ``tree.validate()`` first if
    in doubt); only the ranks on the skeleton are inspected, so the
    cost is proportional to the number of nested members, not to the
    node count.
    """
    k = tree._k
    if k.root == NIL:
        return _NON_MEMBER
    return _classify(k, k.root)


def _rank_of(k, i: int) -> int:
    return -1 if i == NIL else k.rank_at(i)


def _classify(k, i: int) -> EClassification:
    rank = k.rank_at(i)
    if rank == 0:
        leaf = k.left_at(i) == NIL and k.right_at(i) == NIL
        return EClassification(member=leaf) if leaf else _NON_MEMBER
    if rank % 2:
        return _NON_MEMBER
    l, r = k.left_at(i), k.right_at(i)
    if _rank_of(k, l) == rank - 1:
        # candidate type L: root's left child y carries A and B
        y = l
        a, b, c = k.left_at(y), k.right_at(y), r
        etype = EType.L
    elif _rank_of(k, r) == rank - 1 and _rank_of(k, l) == rank - 2:
        # candidate type R: root's right child x carries B and C
        x = r
        a, b, c = l, k.left_at(x), k.right_at(x)
        etype = EType.R
    else:
        return _NON_MEMBER
    if _rank_of(k, a) != rank - 2 or _rank_of(k, c) != rank - 2:
        return _NON_MEMBER
    if _rank_of(k, b) != rank - 3:
        return _NON_MEMBER
    ca = _classify(k, a)
    cc = _classify(k, c)
    member = ca.member and cc.member
    return EClassification(
        member=member, etype=etype if member else None, children=(ca, cc)
    )


def shallow_leaf(tree: Tree) -> int:
    """Key of the leaf reached by always stepping to the 2-child.

    In a member this is the unique shallow leaf at depth k/2.  Raises
    NotExpensiveError when the walk has no 2-child to follow.
    """
    k = tree._k
    i = k.root
    if i == NIL:
        raise NotExpensiveError("the empty tree has no shallow leaf")
    while True:
        l, r = k.left_at(i), k.right_at(i)
        if l == NIL and r == NIL:
            return k.key_at(i)
        rank = k.rank_at(i)
        if l != NIL and rank - k.rank_at(l) == 2:
            i = l
        elif r != NIL and rank - k.rank_at(r) == 2:
            i = r
        else:
            raise NotExpensiveError(
                f"no 2-child to follow at key {k.key_at(i)}"
            )


# -- pair driving -----------------------------------------------------------


@dataclass(frozen=True)
class PairReport:
    """Measured costs of one delete/reinsert pair at the shallow leaf."""

    rank_before: int
    key: int
    delete_counters: RebalanceCounters
    delete_trace: tuple[Case, ...]
    insert_counters: RebalanceCounters
    insert_trace: tuple[Case, ...]
    rank_after_delete: int
    etype_before: Optional[EType]
    etype_after: Optional[EType]
    still_member: Optional[bool]


def delete_reinsert_pair(
    tree: Tree, verify: bool = False, classify: bool = True
) -> PairReport:
    """Delete the shallow leaf, reinsert its key, report exact costs.

    The tree is mutated in place.  ``classify=False`` skips the
    membership checks (the etype/member fields come back None), which
    is what bulk drivers want.  ``verify=True`` asserts the exact
    expected costs and raises VerificationError on any deviation.
    """
    if verify:
        classify = True
    before = classify_expensive(tree) if classify else None
    if classify and not before.member:
        raise NotExpensiveError("tree is not in the expensive family")
    rank_before = tree.rank
    key = shallow_leaf(tree)
    delete_counters, delete_trace = tree.delete(key)
    rank_after = tree.rank
    insert_counters, insert_trace = tree.insert(key)
    after = classify_expensive(tree) if classify else None
    report = PairReport(
        rank_before=rank_before,
        key=key,
        delete_counters=delete_counters,
        delete_trace=delete_trace,
        insert_counters=insert_counters,
        insert_trace=insert_trace,
        rank_after_delete=rank_after,
        etype_before=before.etype if before is not None else None,
        etype_after=after.etype if after is not None else None,
        still_member=after.member if after is not None else None,
    )
    if verify:
        _verify_pair(report)
    return report


def _verify_pair(r: PairReport) -> None:
    k = r.rank_before
    problems = []
    if r.delete_trace != (Case.DEL_SINGLE_REPEAT,) * (k // 2):
        problems.append(
            f"delete fired {r.delete_trace}, expected {k // 2} single-repeat cases"
        )
    if r.insert_trace != (Case.INS_PROMOTE,) * k:
        problems.append(
            f"reinsert fired {r.insert_trace}, expected {k} promotions"
        )
    if r.rank_after_delete != k - 1:
        problems.append(
            f"rank after delete is {r.rank_after_delete}, expected {k - 1}"
        )
    if not r.still_member:
        problems.append("result left the family")
    if k >= 2 and (r.etype_before is None or r.etype_after is not r.etype_before.opposite):
        problems.append(
            f"type went {r.etype_before} -> {r.etype_after}, expected a flip"
        )
    if problems:
        raise VerificationError("; ".join(problems))


def run_pairs(
    tree: Tree, count: int, verify: bool = False, classify: bool = True
) -> list[PairReport]:
    """Drive ``count`` consecutive pairs on ``tree`` (mutating it)."""
    return [
        delete_reinsert_pair(tree, verify=verify, classify=classify)
        for _ in range(count)
    ]


def period(tree: Tree, cap: int) -> int:
    """Pairs needed before the tree first re-equals its starting state.

    ``cap`` bounds the search; a member of rank k repeats after exactly
    2**(k/2) pairs, so give at least that.  Raises CapExceededError if
    no repetition shows up in time, which signals a construction bug.
    """
    start = tree.clone()
    done = 0
    while done < cap:
        delete_reinsert_pair(tree, classify=False)
        done += 1
        if tree.structurally_equal(start):
            return done
    raise CapExceededError(f"no repetition within {cap} pairs")
