"""The expensive family: generation, classification, pair dynamics."""

import pytest

from avlrot import (
    CapExceededError,
    Case,
    NotExpensiveError,
    OddRankError,
    Tree,
    VerificationError,
    classify_expensive,
    delete_reinsert_pair,
    deserialize,
    expensive_size,
    gen_expensive,
    min_avl,
    min_avl_size,
    perfect_avl,
    period,
    run_pairs,
    serialize,
    shallow_leaf,
)
from avlrot.expensive import BPolicy, EType


# -- fewest-node trees ------------------------------------------------------


def test_min_avl_sizes_follow_the_recurrence():
    # size(r) = 1 + size(r-1) + size(r-2), sizes(-1, 0) = 0, 1
    assert min_avl_size(-1) == 0
    assert min_avl_size(0) == 1
    assert min_avl_size(2) == 4
    assert min_avl_size(5) == 20
    for r in range(1, 21):
        assert min_avl_size(r) == 1 + min_avl_size(r - 1) + min_avl_size(r - 2)


def test_min_avl_construction_matches_sizes():
    for r in range(-1, 13):
        t = min_avl(r)
        assert len(t) == min_avl_size(r)
        assert t.rank == r
        if r >= 0:
            assert t.validate().ok
            assert t.keys() == list(range(1, len(t) + 1))


def test_min_avl_is_minimal_by_enumeration():
    # fewest nodes holding a given rank, checked against the catalogs
    from avlrot import enumerate_avl_shapes

    best = {}
    for n in range(0, 13):
        for shape in enumerate_avl_shapes(n).shapes:
            best.setdefault(shape.rank, n)
    for r in range(0, 5):
        assert min_avl_size(r) == best[r]


def test_perfect_avl():
    for r in range(-1, 8):
        t = perfect_avl(r)
        assert len(t) == (1 << (r + 1)) - 1
        assert t.rank == r
        if r >= 0:
            assert t.validate().ok


# -- generation --------------------------------------------------------------


def test_gen_rank0_is_single_node():
    t = gen_expensive(0)
    assert serialize(t) == "(1;0 - -)"


def test_gen_rank2_goldens():
    assert serialize(gen_expensive(2, EType.L)) == "(3;2 (2;1 (1;0 - -) -) (4;0 - -))"
    assert serialize(gen_expensive(2, EType.R)) == "(2;2 (1;0 - -) (3;1 - (4;0 - -)))"


def test_gen_odd_or_negative_rank_rejected():
    with pytest.raises(OddRankError):
        gen_expensive(3)
    with pytest.raises(OddRankError):
        gen_expensive(-2)


def test_gen_sizes_match_recurrence_both_policies():
    # n(k) = 2 n(k-2) + size_B(k-3) + 2
    assert [expensive_size(k) for k in range(0, 13, 2)] == [1, 4, 12, 33, 88, 232, 609]
    for policy in (BPolicy.MINIMAL, BPolicy.PERFECT):
        for k in range(0, 13, 2):
            assert len(gen_expensive(k, EType.L, policy)) == expensive_size(k, policy)
            assert len(gen_expensive(k, EType.R, policy)) == expensive_size(k, policy)


def test_gen_validates_and_classifies_everywhere():
    for k in range(0, 11, 2):
        for etype in (EType.L, EType.R):
            for policy in (BPolicy.MINIMAL, BPolicy.PERFECT):
                t = gen_expensive(k, etype, policy)
                assert t.validate().ok
                c = classify_expensive(t)
                assert c.member
                assert c.etype == (None if k == 0 else etype)


def test_nested_types_alternate():
    c = classify_expensive(gen_expensive(6, EType.L))
    assert c.etype is EType.L
    a, inner_c = c.children
    assert a.etype is EType.L and inner_c.etype is EType.R
    assert a.children[0].etype is EType.L
    assert inner_c.children[0].etype is EType.R


# -- classification negatives -------------------------------------------------


def test_classify_rejects_perfect_tree():
    c = classify_expensive(perfect_avl(2))
    assert not c.member
    assert c.etype is None


def test_classify_rejects_empty_and_odd_ranks():
    assert not classify_expensive(Tree()).member
    assert not classify_expensive(Tree.from_keys([1, 2])).member  # rank 1


def test_classify_rejects_nested_breakage():
    # top-level skeleton intact, nested A rearranged into a non-member
    text = serialize(gen_expensive(4, EType.L))
    member_a = "(3;2 (2;1 (1;0 - -) -) (4;0 - -))"
    benign_a = "(3;2 (1;1 - (2;0 - -)) (4;0 - -))"
    assert member_a in text
    broken = deserialize(text.replace(member_a, benign_a, 1))
    assert broken.validate().ok
    c = classify_expensive(broken)
    assert not c.member
    assert c.etype is None
    assert c.children is not None
    nested_a, nested_c = c.children
    assert not nested_a.member
    assert nested_c.member


def test_shallow_leaf_golden_positions():
    assert shallow_leaf(gen_expensive(0)) == 1
    assert shallow_leaf(gen_expensive(2, EType.L)) == 4
    assert shallow_leaf(gen_expensive(2, EType.R)) == 1
    # type L nests the shallow leaf inside C, type R inside A
    t4 = gen_expensive(4, EType.L)
    assert shallow_leaf(t4) > len(t4) // 2
    t4r = gen_expensive(4, EType.R)
    assert shallow_leaf(t4r) < len(t4r) // 2


def test_shallow_leaf_depth_is_half_rank():
    for k in (2, 4, 6, 8):
        t = gen_expensive(k)
        key = shallow_leaf(t)
        depth = 0
        i = t._k.root
        while t._k.key_at(i) != key:
            i = t._k.left_at(i) if key < t._k.key_at(i) else t._k.right_at(i)
            depth += 1
        assert depth == k // 2


def test_shallow_leaf_requires_a_2_child_path():
    with pytest.raises(NotExpensiveError):
        shallow_leaf(perfect_avl(2))
    with pytest.raises(NotExpensiveError):
        shallow_leaf(Tree())


# -- pairs --------------------------------------------------------------------


def test_pair_rank0_is_identity():
    t = gen_expensive(0)
    rep = delete_reinsert_pair(t, verify=True)
    assert rep.delete_counters.steps == 0
    assert rep.insert_counters.steps == 0
    assert rep.rank_after_delete == -1
    assert rep.still_member
    assert rep.etype_before is None and rep.etype_after is None
    assert serialize(t) == "(1;0 - -)"


def test_pair_rank2_exact_costs():
    t = gen_expensive(2, EType.L)
    rep = delete_reinsert_pair(t, verify=True)
    assert rep.key == 4
    assert rep.delete_trace == (Case.DEL_SINGLE_REPEAT,)
    assert rep.delete_counters.single_rotations == 1
    assert rep.delete_counters.demotions == 0
    assert rep.rank_after_delete == 1
    assert rep.insert_trace == (Case.INS_PROMOTE, Case.INS_PROMOTE)
    assert rep.etype_before is EType.L and rep.etype_after is EType.R
    assert rep.still_member


def test_pair_rank6_exact_costs():
    rep = delete_reinsert_pair(gen_expensive(6, EType.L), verify=True)
    assert rep.delete_counters.single_rotations == 3
    assert rep.delete_counters.double_rotations == 0
    assert rep.delete_counters.demotions == 0
    assert rep.insert_counters.promotions == 6
    assert rep.insert_counters.rotations_total == 0
    assert rep.rank_after_delete == 5
    assert rep.etype_after is EType.R


def test_pair_key_set_is_preserved():
    t = gen_expensive(4)
    keys = t.keys()
    delete_reinsert_pair(t, verify=True)
    assert t.keys() == keys


def test_pair_maps_l_to_r_keeping_a_and_b():
    # type L (A, B, C) -> type R with the same A and B, C replaced
    t = gen_expensive(4, EType.L)
    a_before, b_before, c_before = _member_blocks(t)
    rep = delete_reinsert_pair(t, verify=True)
    assert rep.etype_after is EType.R
    a_after, b_after, c_after = _member_blocks(t)
    assert a_after == a_before
    assert b_after == b_before
    assert c_after != c_before
    assert sorted(k for block in (a_after, b_after, c_after) for k, _ in block) == sorted(
        k for block in (a_before, b_before, c_before) for k, _ in block
    )


def _member_blocks(tree):
    """(key, rank) pre-order listings of the A, B, C subtrees of a member."""
    k = tree._k
    root = k.root
    rank = k.rank_at(root)
    if k.rank_at(k.left_at(root)) == rank - 1:  # type L
        y = k.left_at(root)
        a, b, c = k.left_at(y), k.right_at(y), k.right_at(root)
    else:  # type R
        x = k.right_at(root)
        a, b, c = k.left_at(root), k.left_at(x), k.right_at(x)
    return tuple(_preorder(k, i) for i in (a, b, c))


def _preorder(k, i):
    out = []
    stack = [i]
    while stack:
        j = stack.pop()
        if j == -1:
            continue
        out.append((k.key_at(j), k.rank_at(j)))
        stack.append(k.right_at(j))
        stack.append(k.left_at(j))
    return tuple(out)


def test_run_pairs_round_trip():
    t = gen_expensive(4)
    start = t.clone()
    reports = run_pairs(t, 4, verify=True)
    assert len(reports) == 4
    assert t.structurally_equal(start)
    # and no earlier pair already closed the cycle
    t2 = gen_expensive(4)
    for i in range(3):
        delete_reinsert_pair(t2)
        assert not t2.structurally_equal(start)


def test_run_pairs_zero_count():
    t = gen_expensive(2)
    before = serialize(t)
    assert run_pairs(t, 0) == []
    assert serialize(t) == before


def test_pair_on_non_member_raises():
    with pytest.raises(NotExpensiveError):
        delete_reinsert_pair(perfect_avl(2))


def test_periods_double_per_rank_step():
    for k in (0, 2, 4, 6, 8):
        t = gen_expensive(k)
        assert period(t, cap=2 ** (k // 2) + 8) == 2 ** (k // 2)


def test_period_cap_guard():
    with pytest.raises(CapExceededError):
        period(gen_expensive(4), cap=2)


def test_verify_mode_catches_wrong_starting_tree():
    # valid tree, right skeleton ranks, but B sits at A's rank: the
    # measured pair costs contradict every expected value
    t = deserialize("(4;2 (2;1 (1;0 - -) (3;0 - -)) (5;0 - -))")
    assert not classify_expensive(t).member
    with pytest.raises(NotExpensiveError):
        delete_reinsert_pair(t, verify=True)


def test_same_rank_b_variant_breaks_the_cost_law():
    # the B-at-same-rank-as-A reading of the rank-2 layout: deleting its
    # shallow leaf fires the terminating single-rotation case, keeps the
    # rank at 2, and the reinsertion costs zero promotions
    t = deserialize("(4;2 (2;1 (1;0 - -) (3;0 - -)) (5;0 - -))")
    key = shallow_leaf(t)
    assert key == 5
    del_counters, del_trace = t.delete(key)
    assert del_trace == (Case.DEL_SINGLE_STOP,)
    assert t.rank == 2  # not k - 1
    ins_counters, ins_trace = t.insert(key)
    assert ins_counters.promotions == 0  # not k
    assert ins_trace == ()
    assert not classify_expensive(t).member


def test_expensive_size_rejects_odd():
    with pytest.raises(OddRankError):
        expensive_size(5)
