from fractions import Fraction

import pytest

from peelcount.geometry import (
    DegeneracyError,
    PointSet,
    affinely_independent,
    check_general_position,
    convex_combination_feasible,
    convex_hull_2d,
    convex_layers,
    extreme_points,
    flatten,
    is_extreme,
    is_general_position,
    orientation,
    rat,
    shear_parameter,
    shear_to_distinct_first_coord,
    squared_norm,
)
from _support import rand_gp


def test_rat_accepts_common_forms():
    assert rat(3) == Fraction(3)
    assert rat("7/2") == Fraction(7, 2)
    assert rat(Fraction(1, 3)) == Fraction(1, 3)
    with pytest.raises(TypeError):
        rat(0.25)  # floats are ambiguous; refuse them


def test_orientation_signs():
    a, b = (Fraction(0), Fraction(0)), (Fraction(4), Fraction(0))
    assert orientation(a, b, (Fraction(0), Fraction(4))) == 1
    assert orientation(a, b, (Fraction(0), Fraction(-4))) == -1
    assert orientation(a, b, (Fraction(2), Fraction(0))) == 0


def test_pointset_validation():
    with pytest.raises(ValueError):
        PointSet.from_pairs(2, [(0, (0, 0)), (0, (1, 1))])  # duplicate label
    with pytest.raises(ValueError):
        PointSet.from_pairs(2, [(0, (0, 0, 0))])  # dimension mismatch
    ps = PointSet.planar([(0, 0), (1, 0), (0, 1)])
    assert ps.n == 3 and ps.dim == 2
    assert ps.coord(1) == (Fraction(1), Fraction(0))
    sub = ps.subset([2, 0])
    assert sub.labels == (0, 2)


def test_affine_independence():
    assert affinely_independent([(Fraction(0), Fraction(0)),
                                 (Fraction(1), Fraction(0)),
                                 (Fraction(0), Fraction(1))])
    assert not affinely_independent([(Fraction(0), Fraction(0)),
                                     (Fraction(1), Fraction(1)),
                                     (Fraction(2), Fraction(2))])


def test_general_position_reports_offenders():
    ps = PointSet.planar([(0, 0), (1, 1), (2, 2), (5, 0)])
    with pytest.raises(DegeneracyError) as err:
        check_general_position(ps)
    assert err.value.labels == (0, 1, 2)
    assert not is_general_position(ps)
    assert is_general_position(ps.subset([0, 1, 3]))


def test_general_position_three_dim():
    # four coplanar points in R^3
    ps = PointSet.of_dim(3, [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 7)])
    with pytest.raises(DegeneracyError) as err:
        check_general_position(ps)
    assert err.value.labels == (0, 1, 2, 3)


def test_hull_of_square_with_interior_point():
    ps = PointSet.planar([(0, 0), (4, 0), (4, 4), (0, 4), (1, 2)])
    hull = convex_hull_2d(ps)
    assert sorted(hull) == [0, 1, 2, 3]
    # counterclockwise: every consecutive triple turns left
    pts = [ps.coord(l) for l in hull]
    m = len(pts)
    for i in range(m):
        assert orientation(pts[i], pts[(i + 1) % m], pts[(i + 2) % m]) == 1


def test_extreme_points_planar():
    ps = PointSet.planar([(0, 0), (4, 0), (0, 4), (1, 1)])
    assert extreme_points(ps) == {0, 1, 2}
    assert is_extreme(0, ps) and not is_extreme(3, ps)


def test_extreme_points_three_dim():
    ps = PointSet.of_dim(
        3,
        [(0, 0, 0), (4, 0, 0), (0, 4, 0), (0, 0, 4), (1, 1, 1)],
    )
    assert extreme_points(ps) == {0, 1, 2, 3}
    assert not is_extreme(4, ps)


def test_convex_combination_feasible():
    gens = [(Fraction(0), Fraction(0)), (Fraction(4), Fraction(0)), (Fraction(0), Fraction(4))]
    assert convex_combination_feasible((Fraction(1), Fraction(1)), gens)
    assert not convex_combination_feasible((Fraction(5), Fraction(5)), gens)
    # boundary counts as inside the hull
    assert convex_combination_feasible((Fraction(2), Fraction(0)), gens)


def test_convex_layers_sizes_and_partition():
    ps = PointSet.planar([(0, 6), (-6, -3), (6, -3), (0, 2), (-2, -1), (2, -1)])
    deco = convex_layers(ps)
    assert deco.sizes == (3, 3)
    seen = sorted(l for layer in deco.layers for l in layer)
    assert seen == list(ps.labels)


def test_flatten_preserves_extremes():
    for seed in range(5):
        ps = rand_gp(7, 900 + seed)
        flat = flatten(ps, Fraction(1, 64))
        assert extreme_points(flat) == extreme_points(ps)
        assert is_general_position(flat)


def test_flatten_rejects_bad_eps():
    ps = PointSet.planar([(0, 0), (4, 0), (0, 4)])
    with pytest.raises(ValueError):
        flatten(ps, 0)
    with pytest.raises(ValueError):
        flatten(ps, -1)
    # stretching (eps > 1) is legal; the map just has to be invertible
    assert extreme_points(flatten(ps, Fraction(3, 2))) == extreme_points(ps)


def test_shear_gives_distinct_first_coordinates():
    ps = PointSet.planar([(1, 0), (1, 5), (3, 2), (1, 7)])
    assert shear_parameter(ps) != 0
    sheared = shear_to_distinct_first_coord(ps)
    xs = [pt[0] for pt in sheared.coords]
    assert len(set(xs)) == len(xs)
    # already-distinct input come back unchanged
    ps2 = PointSet.planar([(0, 0), (1, 9), (2, -3)])
    assert shear_parameter(ps2) == 0
    assert shear_to_distinct_first_coord(ps2) is ps2


def test_squared_norm():
    assert squared_norm((Fraction(3), Fraction(4))) == 25
    assert squared_norm((Fraction(1, 2), Fraction(1, 2))) == Fraction(1, 2)
