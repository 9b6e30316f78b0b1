"""Readers and writers for the plain-text point set and block tree formats.

Point set format (".pts"):

    # optional comment lines anywhere
    d n
    label c_1 ... c_d        (one line per point)

Coordinates are integers or reduced rationals written as p/q.  Writers
always emit canonical reduced form.  A file may hold several records
separated by one or more blank lines; the single-record loader rejects
trailing extra records instead of silently dropping them.

Block tree sidecar format (".blocks"): one line per node,

    node_id parent_id label label ...

in preorder, parent_id -1 for the root.  Every child's label list must be
a subset of its parent's.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, TextIO

from peelcount.geometry import PointSet


class ParseError(ValueError):
    """Malformed input file; carries the 1-based offending line number."""

    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__("line %d: %s" % (line_no, message))


def _parse_rational(tok: str, line_no: int) -> Fraction:
    try:
        if "/" in tok:
            num, den = tok.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(int(tok))
    except (ValueError, ZeroDivisionError):
        raise ParseError(line_no, "bad rational %r (use integers or p/q)" % tok) from None


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


def dump_pts(ps: PointSet, fh: TextIO) -> None:
    fh.write("%d %d\n" % (ps.dim, ps.n))
    for lab, pt in zip(ps.labels, ps.coords):
        fh.write("%d %s\n" % (lab, " ".join(format_rational(c) for c in pt)))


def write_pts(ps: PointSet, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        dump_pts(ps, fh)


def _content_lines(text: str):
    """Yield (line_no, stripped) for content lines; blank keeps '' marker."""
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        yield i, line


def parse_pts_records(text: str) -> list[tuple[int, PointSet]]:
    """All records in the text as (starting line number, point set) pairs.

    Raises ParseError on the first malformed record.
    """
    records: list[tuple[int, PointSet]] = []
    lines = [(no, ln) for no, ln in _content_lines(text)]
    pos = 0
    while pos < len(lines):
        while pos < len(lines) and lines[pos][1] == "":
            pos += 1
        if pos >= len(lines):
            break
        start_no, header = lines[pos]
        head_toks = header.split()
        if len(head_toks) != 2:
            raise ParseError(start_no, "expected header 'd n', got %r" % header)
        try:
            dim, n = int(head_toks[0]), int(head_toks[1])
        except ValueError:
            raise ParseError(start_no, "expected integer header 'd n', got %r" % header) from None
        if dim < 1 or n < 0:
            raise ParseError(start_no, "header out of range: d=%d n=%d" % (dim, n))
        pos += 1
        pairs = []
        for _ in range(n):
            while pos < len(lines) and lines[pos][1] == "":
                # blank line inside a record means the record is short
                raise ParseError(lines[pos][0], "record starting at line %d ended early (%d of %d points)" % (start_no, len(pairs), n))
            if pos >= len(lines):
                raise ParseError(start_no, "record truncated: expected %d points, found %d" % (n, len(pairs)))
            no, line = lines[pos]
            toks = line.split()
            if len(toks) != dim + 1:
                raise ParseError(no, "expected 'label' plus %d coordinates, got %d fields" % (dim, len(toks) - 1))
            try:
                lab = int(toks[0])
            except ValueError:
                raise ParseError(no, "bad label %r" % toks[0]) from None
            coords = tuple(_parse_rational(t, no) for t in toks[1:])
            pairs.append((lab, coords))
            pos += 1
        try:
            records.append((start_no, PointSet.from_pairs(dim, pairs)))
        except ValueError as exc:
            raise ParseError(start_no, "invalid record: %s" % exc) from None
    return records


def load_pts(path) -> PointSet:
    """Load a single-record .pts file; a second record is an error."""
    with open(path, "r", encoding="ascii") as fh:
        text = fh.read()
    records = parse_pts_records(text)
    if not records:
        raise ParseError(1, "no point set record found")
    if len(records) > 1:
        raise ParseError(records[1][0], "expected a single record, found %d" % len(records))
    return records[0][1]


def load_pts_records(path) -> list[tuple[int, PointSet]]:
    with open(path, "r", encoding="ascii") as fh:
        return parse_pts_records(fh.read())


# ---- block trees ----


def write_blocks(tree, path) -> None:
    from peelcount.constructions import BlockTree  # local import avoids a cycle

    assert isinstance(tree, BlockTree)
    rows = []

    def visit(node, parent_id):
        node_id = len(rows)
        rows.append((node_id, parent_id, node.labels))
        for child in node.children:
            visit(child, node_id)

    visit(tree, -1)
    with open(path, "w", encoding="ascii") as fh:
        for node_id, parent_id, labels in rows:
            fh.write("%d %d %s\n" % (node_id, parent_id, " ".join(str(x) for x in labels)))


def load_blocks(path):
    from peelcount.constructions import BlockTree

    nodes: dict[int, tuple[int, tuple[int, ...]]] = {}
    order: list[int] = []
    decl_line: dict[int, int] = {}
    with open(path, "r", encoding="ascii") as fh:
        for no, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            toks = line.split()
            if len(toks) < 2:
                raise ParseError(no, "expected 'node_id parent_id label...'")
            try:
                node_id, parent_id = int(toks[0]), int(toks[1])
                labels = tuple(int(t) for t in toks[2:])
            except ValueError:
                raise ParseError(no, "bad integer field in %r" % line) from None
            if node_id in nodes:
                raise ParseError(no, "duplicate node id %d" % node_id)
            nodes[node_id] = (parent_id, labels)
            order.append(node_id)
            decl_line[node_id] = no
    if not nodes:
        raise ParseError(1, "empty block tree file")
    roots = [nid for nid in order if nodes[nid][0] == -1]
    if len(roots) != 1:
        raise ParseError(1, "expected exactly one root node, found %d" % len(roots))
    children: dict[int, list[int]] = {nid: [] for nid in order}
    for nid in order:
        parent_id, _ = nodes[nid]
        if parent_id == -1:
            continue
        if parent_id not in nodes:
            raise ParseError(
                decl_line[nid], "node %d references missing parent %d" % (nid, parent_id)
            )
        children[parent_id].append(nid)

    def build(nid) -> "BlockTree":
        _, labels = nodes[nid]
        kids = tuple(build(c) for c in children[nid])
        for kid in kids:
            if not set(kid.labels) <= set(labels):
                raise ParseError(1, "node labels of %d are not a subset of parent %d" % (nid, nid))
        return BlockTree(labels=labels, children=kids)

    return build(roots[0])
