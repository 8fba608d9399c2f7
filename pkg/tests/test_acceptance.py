"""End-to-end acceptance checks, one test per numbered criterion.

Every assertion here is an exact count; nothing is approximate except
the single band check in criterion 4, whose tolerance is pinned to
[0.2, 2.0].  Wall-clock budgets were set against the compiled kernel
and relax 30x when the pure kernel is forced via AVLROT_BACKEND.
"""

import math
import random
from time import perf_counter

from avlrot import (
    BACKEND,
    BPolicy,
    Case,
    EType,
    Tree,
    classify_expensive,
    delete_reinsert_pair,
    enumerate_avl_shapes,
    gen_expensive,
    is_height_balanced,
    min_avl,
    min_avl_size,
    period,
    shallow_leaf,
    verify_promotion_only,
)
from avlrot.cli import run_bench

TIME_FACTOR = 1.0 if BACKEND == "compiled" else 30.0


def test_criterion_1_exact_pair_costs():
    """Shallow-leaf deletion costs exactly k/2 single rotations and the
    reinsertion exactly k promotions, per even rank, etype and B policy."""
    t0 = perf_counter()
    for k in range(0, 21, 2):
        for etype in EType:
            for policy in BPolicy:
                tree = gen_expensive(k, etype, policy)
                assert tree.validate().ok
                assert tree.rank == k
                rep = delete_reinsert_pair(tree)
                dc, ic = rep.delete_counters, rep.insert_counters

                assert dc.single_rotations == k // 2
                assert dc.double_rotations == 0
                assert dc.demotions == 0
                assert rep.rank_after_delete == k - 1

                assert ic.promotions == k
                assert ic.rotations_total == 0

                assert rep.still_member
                if k >= 2:
                    assert rep.etype_before is etype
                    assert rep.etype_after is etype.opposite
                else:
                    assert rep.etype_after is None
    elapsed = perf_counter() - t0
    assert elapsed < 1.0 * TIME_FACTOR, f"criterion 1 took {elapsed:.3f}s"


def test_criterion_2_periodicity():
    """A member of rank k first re-equals its starting shape after
    exactly 2**(k/2) delete/reinsert pairs, never earlier."""
    t0 = perf_counter()
    for k in range(0, 13, 2):
        expected = 2 ** (k // 2)
        tree = gen_expensive(k)
        # period() returns the FIRST recurrence, so equality at expected
        # and at no earlier pair are one and the same assertion
        assert period(tree, cap=expected) == expected
    elapsed = perf_counter() - t0
    assert elapsed < 1.0 * TIME_FACTOR, f"criterion 2 took {elapsed:.3f}s"


def test_criterion_3_promotion_only_rebuild():
    """The level-order plan rebuilds every target with zero rotations and
    zero demotions, matching each truncation level by level."""
    t0 = perf_counter()
    targets = []
    for n in range(0, 13):
        targets.extend(enumerate_avl_shapes(n).shapes)
    for k in range(0, 13, 2):
        for etype in EType:
            for policy in BPolicy:
                targets.append(gen_expensive(k, etype, policy))
    for r in range(0, 13):
        targets.append(min_avl(r))

    for target in targets:
        rep = verify_promotion_only(target)
        assert rep.ok, f"rebuild failed for {target!r}"
        assert rep.counters.rotations_total == 0
        assert rep.counters.demotions == 0
        assert all(rep.level_matches)
        assert all(b == 1 for b in rep.root_rank_bumps)
    elapsed = perf_counter() - t0
    assert elapsed < 10.0 * TIME_FACTOR, f"criterion 3 took {elapsed:.3f}s"


def test_criterion_4_bench_exact_totals_and_band():
    """cmd_bench rows for k <= 16: zero build rotations, pair rotations
    exactly n*k/2, and total/(n*log2 n) inside [0.2, 2.0] for k >= 2."""
    t0 = perf_counter()
    rows = run_bench(16)
    assert [row.rank for row in rows] == list(range(0, 17, 2))
    for row in rows:
        assert row.build_rotations == 0
        assert row.total_pair_rotations == row.nodes * row.rank // 2
        if row.rank >= 2:
            ratio = row.total_pair_rotations / (row.nodes * math.log2(row.nodes))
            assert 0.2 <= ratio <= 2.0, f"k={row.rank}: ratio {ratio:.3f}"
    elapsed = perf_counter() - t0
    assert elapsed < 5.0 * TIME_FACTOR, f"criterion 4 took {elapsed:.3f}s"


def test_criterion_5_same_rank_b_is_not_expensive():
    """Putting B at the same rank as A in the rank-2 construction yields a
    tree whose pair costs contradict criterion 1: the deletion stops after
    one rotation, the root keeps rank 2, and the reinsertion promotes
    nothing.  That is why gen_expensive builds B one rank below A."""
    literal = Tree.from_text("(4;2 (2;1 (1;0 - -) (3;0 - -)) (5;0 - -))")
    assert literal.validate().ok
    assert not classify_expensive(literal).member

    key = shallow_leaf(literal)
    assert key == 5
    counters, trace = literal.delete(key)
    assert trace == (Case.DEL_SINGLE_STOP,)
    assert counters.rotations_total == 1
    assert literal.rank == 2

    counters, trace = literal.insert(key)
    assert counters.promotions == 0
    assert trace == ()
    assert not classify_expensive(literal).member


def test_criterion_6_fuzzed_operation_bounds():
    """10**5 random mutations: insertions never rotate more than twice or
    demote, deletions never exceed the pre-deletion rank in rotations,
    validity holds after every step, and all seven case labels show up."""
    rng = random.Random(902207)
    tree = Tree()
    present = set()
    seen = set()
    for _ in range(100_000):
        key = rng.randrange(256)
        pre_rank = tree.rank
        if key in present:
            counters, trace = tree.delete(key)
            present.discard(key)
            assert counters.promotions == 0
            assert counters.rotations_total <= max(pre_rank, 0)
        else:
            counters, trace = tree.insert(key)
            present.add(key)
            assert counters.demotions == 0
            assert counters.rotations_total <= 2
            assert sum(1 for c in trace if c != Case.INS_PROMOTE) <= 1
        seen.update(trace)
        assert tree.validate().ok
        assert is_height_balanced(tree)
        assert sorted(present) == tree.keys()
    assert seen == set(Case), f"labels never seen: {set(Case) - seen}"


def test_criterion_7_counting_laws():
    """Minimal-tree sizes obey F(r) = 1 + F(r-1) + F(r-2) and member
    sizes obey n(k) = 2 n(k-2) + F(k-3) + 2, checked by construction."""
    f = {-1: 0, 0: 1}
    for r in range(1, 21):
        f[r] = 1 + f[r - 1] + f[r - 2]
    for r in range(0, 21):
        assert min_avl_size(r) == f[r]
        assert len(min_avl(r)) == f[r]

    n = {0: 1}
    for k in range(2, 21, 2):
        n[k] = 2 * n[k - 2] + f[k - 3] + 2
    for k in range(0, 21, 2):
        for etype in EType:
            assert len(gen_expensive(k, etype)) == n[k]

    # same law with the perfect-policy B, whose rank-j subtree has
    # 2**(j+1) - 1 nodes
    p = {0: 1}
    for k in range(2, 21, 2):
        p[k] = 2 * p[k - 2] + (2 ** (k - 2) - 1) + 2
    assert p[20] == 525823
    for k in range(0, 21, 2):
        assert len(gen_expensive(k, EType.L, BPolicy.PERFECT)) == p[k]
