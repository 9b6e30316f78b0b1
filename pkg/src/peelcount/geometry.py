"""Exact rational geometry primitives for hull peeling.

Every coordinate is a fractions.Fraction and every predicate is decided by
exact sign computation.  No floating point is consulted on any decision
path.  The planar extreme-point machinery is a monotone-chain hull over
lexicographically sorted points; in dimension three and up, extremeness of
a point p within a set Q is decided by exact feasibility of the convex
combination system

    sum_i  t_i * q_i = p,   sum_i t_i = 1,   t_i >= 0,

solved with a phase-1 simplex under Bland's rule (finite termination, no
tolerances).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Point = tuple[Fraction, ...]


class DegeneracyError(ValueError):
    """A required general-position assumption fails.

    ``labels`` carries one offending affinely dependent tuple.
    """

    def __init__(self, labels: Iterable[int], message: str | None = None):
        self.labels = tuple(labels)
        super().__init__(message or "affinely dependent points: %s" % (self.labels,))


class CapacityError(ValueError):
    """Input exceeds a hard size guard."""


def rat(value) -> Fraction:
    """Coerce an int, string like '3/7', or Fraction to an exact Fraction.

    Floats are rejected: silently adopting a binary approximation would
    poison every exactness guarantee downstream.
    """
    if isinstance(value, bool):
        raise TypeError("bool is not a coordinate")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, float):
        raise TypeError("float coordinates are not accepted; pass int, Fraction, or 'p/q' string")
    raise TypeError("cannot interpret %r as a rational" % (value,))


def _as_point(coords, dim: int) -> Point:
    pt = tuple(rat(c) for c in coords)
    if len(pt) != dim:
        raise ValueError("expected %d coordinates, got %d" % (dim, len(pt)))
    return pt


@dataclass(frozen=True)
class PointSet:
    """A finite labeled set of distinct rational points in R^dim.

    Labels are nonnegative integers, unique within the set.  Order of the
    (label, point) rows is preserved and used only for presentation.
    """

    dim: int
    labels: tuple[int, ...]
    coords: tuple[Point, ...]

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be at least 1")
        if len(self.labels) != len(self.coords):
            raise ValueError("labels and coordinates disagree in length")
        for lab in self.labels:
            if not isinstance(lab, int) or lab < 0:
                raise ValueError("labels must be nonnegative integers, got %r" % (lab,))
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate labels")
        for pt in self.coords:
            if len(pt) != self.dim:
                raise ValueError("point %r does not have dimension %d" % (pt, self.dim))
        if len(set(self.coords)) != len(self.coords):
            raise ValueError("duplicate points")
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(self.labels)})

    @classmethod
    def from_pairs(cls, dim: int, pairs: Iterable[tuple[int, Sequence]]) -> "PointSet":
        labels = []
        coords = []
        for lab, pt in pairs:
            labels.append(lab)
            coords.append(_as_point(pt, dim))
        return cls(dim, tuple(labels), tuple(coords))

    @classmethod
    def planar(cls, points: Iterable[Sequence], labels: Iterable[int] | None = None) -> "PointSet":
        coords = tuple(_as_point(p, 2) for p in points)
        labs = tuple(labels) if labels is not None else tuple(range(len(coords)))
        return cls(2, labs, coords)

    @classmethod
    def of_dim(cls, dim: int, points: Iterable[Sequence], labels: Iterable[int] | None = None) -> "PointSet":
        coords = tuple(_as_point(p, dim) for p in points)
        labs = tuple(labels) if labels is not None else tuple(range(len(coords)))
        return cls(dim, labs, coords)

    @property
    def n(self) -> int:
        return len(self.labels)

    def index_of(self, label: int) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ValueError("unknown label %r" % (label,)) from None

    def coord(self, label: int) -> Point:
        return self.coords[self.index_of(label)]

    def subset(self, labels: Iterable[int]) -> "PointSet":
        """Sub point set on the given labels, original row order kept."""
        keep = set(labels)
        unknown = keep - set(self.labels)
        if unknown:
            raise ValueError("unknown labels %s" % sorted(unknown))
        pairs = [(lab, self.coords[i]) for i, lab in enumerate(self.labels) if lab in keep]
        return PointSet(self.dim, tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))

    def pairs(self) -> list[tuple[int, Point]]:
        return list(zip(self.labels, self.coords))


def orientation(p, q, r) -> int:
    """Sign of the signed area of the planar triangle p, q, r.

    Returns +1 for a counterclockwise turn, -1 for clockwise, 0 for
    collinear.
    """
    if len(p) != 2 or len(q) != 2 or len(r) != 2:
        raise ValueError("orientation is a planar predicate")
    d = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    if d > 0:
        return 1
    if d < 0:
        return -1
    return 0


def _row_rank(rows: list[list[Fraction]]) -> int:
    # plain fraction Gaussian elimination, exact
    mat = [list(r) for r in rows]
    nrows = len(mat)
    ncols = len(mat[0]) if mat else 0
    rank = 0
    col = 0
    while rank < nrows and col < ncols:
        piv = None
        for i in range(rank, nrows):
            if mat[i][col] != 0:
                piv = i
                break
        if piv is None:
            col += 1
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        head = mat[rank][col]
        for i in range(rank + 1, nrows):
            if mat[i][col] != 0:
                factor = mat[i][col] / head
                mat[i] = [a - factor * b for a, b in zip(mat[i], mat[rank])]
        rank += 1
        col += 1
    return rank


def affinely_independent(points: Sequence[Point]) -> bool:
    """True when the points span an affine subspace of dimension len-1."""
    if len(points) <= 1:
        return True
    base = points[0]
    rows = [[c - b for c, b in zip(p, base)] for p in points[1:]]
    return _row_rank(rows) == len(points) - 1


def check_general_position(ps: PointSet) -> None:
    """Raise DegeneracyError naming an offending tuple, or return None.

    General position means every subset of min(dim + 1, n) points is
    affinely independent; in the plane, no three points are collinear.
    """
    m = min(ps.dim + 1, ps.n)
    if m <= 1:
        return
    if ps.dim == 2 and ps.n >= 3:
        n = ps.n
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    if orientation(ps.coords[i], ps.coords[j], ps.coords[k]) == 0:
                        raise DegeneracyError((ps.labels[i], ps.labels[j], ps.labels[k]))
        return
    for idxs in itertools.combinations(range(ps.n), m):
        if not affinely_independent([ps.coords[i] for i in idxs]):
            raise DegeneracyError(tuple(ps.labels[i] for i in idxs))


def is_general_position(ps: PointSet) -> bool:
    try:
        check_general_position(ps)
    except DegeneracyError:
        return False
    return True


def _chain_hull(order: Sequence[int], coords: Sequence[Point], orient) -> list[int]:
    """Monotone chain over pre-sorted indices; returns hull indices in CCW order.

    ``orient`` maps an index triple to the orientation sign.  Points on the
    interior of a hull edge are dropped, which is exactly the extreme-point
    semantics needed here.
    """
    if len(order) <= 2:
        return list(order)
    lower: list[int] = []
    for i in order:
        while len(lower) >= 2 and orient(lower[-2], lower[-1], i) <= 0:
            lower.pop()
        lower.append(i)
    upper: list[int] = []
    for i in reversed(order):
        while len(upper) >= 2 and orient(upper[-2], upper[-1], i) <= 0:
            upper.pop()
        upper.append(i)
    return lower[:-1] + upper[:-1]


def _sorted_indices(coords: Sequence[Point]) -> list[int]:
    return sorted(range(len(coords)), key=lambda i: coords[i])


def convex_hull_2d(ps: PointSet) -> list[int]:
    """Labels of the hull vertices in counterclockwise order.

    Rejects degenerate (collinear triple) input.  For n <= 2 every point is
    a vertex and input order is kept.
    """
    if ps.dim != 2:
        raise ValueError("convex_hull_2d needs planar input")
    if ps.n <= 2:
        return list(ps.labels)
    check_general_position(ps)
    order = _sorted_indices(ps.coords)

    def orient(i, j, k):
        return orientation(ps.coords[i], ps.coords[j], ps.coords[k])

    hull = _chain_hull(order, ps.coords, orient)
    return [ps.labels[i] for i in hull]


def convex_combination_feasible(target: Point, generators: Sequence[Point]) -> bool:
    """Exact membership of ``target`` in the convex hull of ``generators``.

    Phase-1 simplex with Bland's smallest-index rule.  The system has one
    equality row per coordinate plus the normalization row; every row gets
    an artificial variable and the artificials are priced out.  Feasible
    iff the minimized artificial mass is exactly zero.
    """
    if not generators:
        return False
    d = len(target)
    m = len(generators)
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for i in range(d):
        row = [g[i] - target[i] for g in generators]
        # scale the row to small integers; equalities are invariant under it
        dens = [x.denominator for x in row]
        lcm = 1
        for den in dens:
            lcm = lcm * den // gcd(lcm, den)
        ints = [int(x * lcm) for x in row]
        g = 0
        for v in ints:
            g = gcd(g, abs(v))
        if g > 1:
            ints = [v // g for v in ints]
        rows.append([Fraction(v) for v in ints])
        rhs.append(Fraction(0))
    rows.append([Fraction(1)] * m)
    rhs.append(Fraction(1))

    nrows = len(rows)
    # tableau columns: m structural, nrows artificial, then rhs
    tab = [rows[i] + [Fraction(int(i == j)) for j in range(nrows)] + [rhs[i]] for i in range(nrows)]
    basis = [m + i for i in range(nrows)]
    # phase-1 objective row: reduced costs of structural columns under the
    # all-artificial basis; entering is profitable while some entry is positive
    obj = [sum(tab[i][j] for i in range(nrows)) for j in range(m)]

    for _ in range(100000):
        enter = -1
        for j in range(m):
            if obj[j] > 0:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        best = None
        for i in range(nrows):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            raise RuntimeError("phase-1 objective unbounded; invariant broken")
        piv = tab[leave][enter]
        tab[leave] = [x / piv for x in tab[leave]]
        for i in range(nrows):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[leave])]
        f = obj[enter]
        obj = [x - f * y for x, y in zip(obj, tab[leave][:m])]
        basis[leave] = enter
    else:
        raise RuntimeError("simplex failed to terminate")

    mass = sum(tab[i][-1] for i in range(nrows) if basis[i] >= m)
    return mass == 0


def is_extreme(label: int, ps: PointSet) -> bool:
    """Whether the labeled point is a vertex of the convex hull of the set."""
    idx = ps.index_of(label)
    if ps.n == 1:
        return True
    if ps.dim == 1:
        vals = [c[0] for c in ps.coords]
        return ps.coords[idx][0] in (min(vals), max(vals))
    if ps.dim == 2:
        return label in set(convex_hull_2d(ps))
    check_general_position(ps)
    others = [c for i, c in enumerate(ps.coords) if i != idx]
    return not convex_combination_feasible(ps.coords[idx], others)


def extreme_points(ps: PointSet) -> set[int]:
    if ps.dim == 2:
        return set(convex_hull_2d(ps))
    check_general_position(ps)
    if ps.n <= ps.dim + 1:
        return set(ps.labels)
    out = set()
    for i, lab in enumerate(ps.labels):
        others = [c for j, c in enumerate(ps.coords) if j != i]
        if not convex_combination_feasible(ps.coords[i], others):
            out.add(lab)
    return out


@dataclass(frozen=True)
class LayerDecomposition:
    """Onion peeling of a planar set: layers of extreme points, outermost first."""

    layers: tuple[frozenset[int], ...]

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(layer) for layer in self.layers)

    @property
    def depth(self) -> int:
        return len(self.layers)


def convex_layers(ps: PointSet) -> LayerDecomposition:
    """Repeatedly strip the hull vertices of what remains (planar only)."""
    if ps.dim != 2:
        raise ValueError("convex_layers needs planar input")
    check_general_position(ps)
    remaining = dict(zip(ps.labels, ps.coords))
    layers = []
    while remaining:
        labs = list(remaining)
        coords = [remaining[lab] for lab in labs]
        if len(labs) <= 2:
            hull = list(range(len(labs)))
        else:
            order = _sorted_indices(coords)
            hull = _chain_hull(order, coords, lambda i, j, k: orientation(coords[i], coords[j], coords[k]))
        layer = frozenset(labs[i] for i in hull)
        layers.append(layer)
        for lab in layer:
            del remaining[lab]
    return LayerDecomposition(tuple(layers))


def flatten(ps: PointSet, eps) -> PointSet:
    """Squash all coordinates after the first by the positive factor eps.

    The image of (x1, x2, ..., xd) is (x1, eps*x2, ..., eps*xd).  This is
    an invertible linear map, so hulls, extreme points, and peeling counts
    are carried over unchanged; only the metric shape changes.
    """
    e = rat(eps)
    if e <= 0:
        raise ValueError("flattening factor must be positive")
    coords = tuple((pt[0],) + tuple(e * c for c in pt[1:]) for pt in ps.coords)
    return PointSet(ps.dim, ps.labels, coords)


def shear_parameter(ps: PointSet) -> Fraction:
    """First t from the stream 0, 1, 1/2, 1/4, ... whose shear separates x1.

    The shear sends x1 to x1 + t*x2 + t^2*x3 + ...; a colliding pair rules
    out only the finitely many roots of a nonzero polynomial in t, so the
    scan terminates.
    """
    if ps.dim == 1 or ps.n <= 1:
        return Fraction(0)

    def candidates():
        yield Fraction(0)
        k = 0
        while True:
            yield Fraction(1, 2 ** k)
            k += 1

    for t in candidates():
        weights = [t ** j for j in range(1, ps.dim)]
        firsts = [pt[0] + sum(w * c for w, c in zip(weights, pt[1:])) for pt in ps.coords]
        if len(set(firsts)) == ps.n:
            return t
    raise AssertionError("unreachable")


def shear_to_distinct_first_coord(ps: PointSet) -> PointSet:
    """Affine shear making all first coordinates pairwise distinct.

    Applies x1 -> x1 + t*x2 + t^2*x3 + ... with t = shear_parameter(ps).
    The map is invertible and affine, hence preserves extreme-point
    structure and peeling counts exactly.
    """
    t = shear_parameter(ps)
    if t == 0:
        return ps
    weights = [t ** j for j in range(1, ps.dim)]
    coords = tuple(
        (pt[0] + sum(w * c for w, c in zip(weights, pt[1:])),) + pt[1:] for pt in ps.coords
    )
    return PointSet(ps.dim, ps.labels, coords)


def squared_norm(pt: Point) -> Fraction:
    return sum(c * c for c in pt)
