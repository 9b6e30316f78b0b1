"""Certified recursive constructions and the block-hull invariant."""

from fractions import Fraction

import pytest

from peelcount.constructions import (
    BlockTree,
    CertificationError,
    build_simplex,
    build_ternary,
    build_threeblock,
    certify_epsilon,
    verify_all_levels,
    verify_invariant,
)
from peelcount.geometry import CapacityError, PointSet
from peelcount.peeling import count, count_bruteforce

THREEBLOCK_COUNTS = [6, 18, 60, 180, 624, 1992, 6624, 24144, 74352, 257940]


def leaf(*labels):
    return BlockTree(labels=tuple(labels))


def test_blocktree_validation():
    with pytest.raises(ValueError):
        BlockTree(labels=(1, 1))
    with pytest.raises(ValueError):
        BlockTree(labels=())
    with pytest.raises(ValueError):
        BlockTree(labels=(0, 1, 2), children=(leaf(0), leaf(1, 3)))


def test_blocktree_traversal():
    tree = BlockTree(labels=(0, 1, 2), children=(leaf(0, 1), leaf(2)))
    assert [node.labels for node in tree.walk()] == [(0, 1, 2), (0, 1), (2,)]
    assert tree.depth() == 2
    assert not tree.is_leaf
    assert tree.children[1].is_leaf


@pytest.mark.parametrize(
    "k,schedule",
    [
        (1, (Fraction(1),)),
        (2, (Fraction(1), Fraction(1, 4))),
        (3, (Fraction(1), Fraction(1, 4), Fraction(1, 8))),
    ],
)
def test_ternary_squash_schedules_frozen(k, schedule):
    assert build_ternary(k).spec.eps_schedule == schedule


def test_simplex_schedule_frozen():
    assert build_simplex(3, 2).spec.eps_schedule == (Fraction(1), Fraction(1, 8))


def test_ternary_level_two_count():
    c = build_ternary(2)
    assert c.spec.n == 9 and c.spec.d == 2
    assert c.certification.passed
    assert count(c.points) == 6624
    assert count_bruteforce(c.points) == 6624


def test_planar_simplex_matches_ternary_count():
    # the d=2 simplex family and the ternary family share layout degrees
    assert count(build_simplex(2, 2).points) == 6624


@pytest.mark.parametrize("n", range(3, 13))
def test_threeblock_counts_frozen(n):
    c = build_threeblock(n)
    assert c.certification.passed
    assert count(c.points) == THREEBLOCK_COUNTS[n - 3]
    if n <= 10:  # oracle route stays affordable
        assert count_bruteforce(c.points) == THREEBLOCK_COUNTS[n - 3]


def test_threeblock_split_sizes():
    c = build_threeblock(7)
    sizes = sorted(len(ch.labels) for ch in c.blocks.children)
    assert sizes == [2, 2, 3]


def test_simplex_three_dim():
    c1 = build_simplex(3, 1)
    assert c1.spec.n == 4 and c1.spec.d == 3
    assert count(c1.points) == 24
    c2 = build_simplex(3, 2)
    assert c2.spec.n == 16
    assert c2.certification.passed


def test_invariant_violation_reported():
    # two 2-point blocks in convex position: the full state shows four
    # hull vertices where the invariant demands one per block
    ps = PointSet.planar([(0, 0), (10, 0), (10, 10), (0, 10)])
    tree = BlockTree(labels=(0, 1, 2, 3), children=(leaf(0, 1), leaf(2, 3)))
    report = verify_invariant(ps, tree)
    assert not report.passed
    assert report.arity == 2
    v = report.violations[0]
    assert "expected 2" in v.reason
    assert sorted(v.remaining) == [0, 1, 2, 3]


def test_invariant_mode_validation():
    ps = PointSet.planar([(0, 0), (4, 0), (0, 4)])
    tree = BlockTree(labels=(0, 1, 2), children=(leaf(0), leaf(1), leaf(2)))
    with pytest.raises(ValueError):
        verify_invariant(ps, tree, mode="guess")
    with pytest.raises(ValueError):
        verify_invariant(ps, BlockTree(labels=(0, 1), children=(leaf(0), leaf(1))))


def test_sampled_mode_agrees_on_pass():
    c = build_ternary(2)
    rep = verify_invariant(c.points, c.blocks, mode="sampled", samples=500, seed=9)
    assert rep.passed
    assert rep.samples_run == 500
    assert rep.states_checked > 0


def test_verify_all_levels_with_centers():
    c = build_ternary(2)
    results = verify_all_levels(c.points, c.blocks, centers=c.center_map())
    assert len(results) == 4  # root plus three level-one copies
    assert all(rep.passed for _, rep in results)


def test_center_map_root_is_origin():
    c = build_ternary(2)
    root_key = tuple(sorted(c.points.labels))
    assert c.center_map()[root_key] == (0, 0)


def test_certify_epsilon_trivial_triangle():
    ps = PointSet.planar([(0, 0), (4, 0), (0, 4)])
    tree = BlockTree(labels=(0, 1, 2), children=(leaf(0), leaf(1), leaf(2)))
    assert certify_epsilon(ps, tree) == 1


def test_certify_epsilon_needs_one_halving():
    # at full height the two-point block's hull vertex is not its farthest
    # point; squashing the second coordinate by 1/2 repairs it
    ps = PointSet.planar([(8, 1), (2, 9), (-2, 20), (1, -8)])
    tree = BlockTree(labels=(0, 1, 2, 3), children=(leaf(0, 1), leaf(2), leaf(3)))
    base = verify_invariant(ps, tree)
    assert not base.passed
    assert certify_epsilon(ps, tree) == Fraction(1, 2)


def test_certify_epsilon_degenerate_input():
    ps = PointSet.planar([(0, 0), (1, 1), (2, 2)])
    tree = BlockTree(labels=(0, 1, 2), children=(leaf(0), leaf(1), leaf(2)))
    with pytest.raises(CertificationError):
        certify_epsilon(ps, tree)


def test_builder_argument_validation():
    with pytest.raises(ValueError):
        build_ternary(-1)
    with pytest.raises(ValueError):
        build_threeblock(0)
    with pytest.raises(ValueError):
        build_simplex(1, 2)
    with pytest.raises(ValueError):
        build_simplex(3, -1)


def test_builder_capacity():
    with pytest.raises(CapacityError):
        build_threeblock(65)
    with pytest.raises(CapacityError):
        build_ternary(4)


def test_constructions_are_deterministic():
    a = build_threeblock(8)
    b = build_threeblock(8)
    assert a.points.coords == b.points.coords
    assert a.spec == b.spec
