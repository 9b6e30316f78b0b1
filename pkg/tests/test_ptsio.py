import io
from fractions import Fraction

import pytest

from peelcount.constructions import BlockTree, build_ternary
from peelcount.geometry import PointSet
from peelcount.ptsio import (
    ParseError,
    dump_pts,
    format_rational,
    load_blocks,
    load_pts,
    load_pts_records,
    parse_pts_records,
    write_blocks,
    write_pts,
)


def test_format_rational():
    assert format_rational(Fraction(3)) == "3"
    assert format_rational(Fraction(-7, 2)) == "-7/2"
    assert format_rational(Fraction(2, 4)) == "1/2"


def test_round_trip_planar(tmp_path):
    ps = PointSet.planar([(0, 0), (Fraction(1, 3), -2), (5, Fraction(-7, 11))])
    path = tmp_path / "a.pts"
    write_pts(ps, path)
    back = load_pts(path)
    assert back.labels == ps.labels
    assert back.coords == ps.coords
    assert back.dim == 2


def test_round_trip_three_dim(tmp_path):
    ps = PointSet.of_dim(3, [(1, 2, 3), (0, 0, 1), (Fraction(1, 2), 0, 0), (4, 4, 4)])
    path = tmp_path / "b.pts"
    write_pts(ps, path)
    assert load_pts(path).coords == ps.coords


def test_multi_record_parse():
    text = "# two records\n2 2\n0 0 0\n1 1 1\n\n2 3\n5 0 0\n6 1 0\n7 0 1\n"
    records = parse_pts_records(text)
    assert [ps.n for _, ps in records] == [2, 3]
    assert records[1][1].labels == (5, 6, 7)


def test_error_line_numbers():
    with pytest.raises(ParseError) as err:
        parse_pts_records("2 3\n0 0 0\n1 bad 0\n2 0 4\n")
    assert err.value.line_no == 3
    with pytest.raises(ParseError) as err:
        parse_pts_records("2 4\n0 0 0\n1 1 0\n")
    assert err.value.line_no == 1  # truncation reported at the header
    with pytest.raises(ParseError) as err:
        parse_pts_records("2 2\n0 0 0\n0 1 1\n")  # duplicate label
    assert err.value.line_no == 1


def test_single_record_loader_rejects_extras(tmp_path):
    path = tmp_path / "two.pts"
    path.write_text("2 1\n0 0 0\n\n2 1\n1 2 2\n")
    with pytest.raises(ParseError):
        load_pts(path)
    assert len(load_pts_records(path)) == 2


def test_dump_is_parseable_text():
    ps = PointSet.planar([(Fraction(1, 2), 0), (1, 1)])
    buf = io.StringIO()
    dump_pts(ps, buf)
    assert buf.getvalue() == "2 2\n0 1/2 0\n1 1 1\n"


def test_blocks_round_trip(tmp_path):
    tree = BlockTree(
        labels=(0, 1, 2, 3, 4),
        children=(
            BlockTree(labels=(0, 1), children=()),
            BlockTree(
                labels=(2, 3, 4),
                children=(
                    BlockTree(labels=(2,), children=()),
                    BlockTree(labels=(3, 4), children=()),
                ),
            ),
        ),
    )
    path = tmp_path / "t.blocks"
    write_blocks(tree, path)
    back = load_blocks(path)
    assert back == tree


def test_blocks_round_trip_constructed(tmp_path):
    built = build_ternary(2)
    path = tmp_path / "s9.blocks"
    write_blocks(built.blocks, path)
    assert load_blocks(path) == built.blocks


def test_blocks_bad_parent(tmp_path):
    path = tmp_path / "bad.blocks"
    path.write_text("0 -1 0 1\n1 5 0\n")
    with pytest.raises(ParseError) as err:
        load_blocks(path)
    assert err.value.line_no == 2
