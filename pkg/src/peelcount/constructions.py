"""Recursive ray constructions with certified flattening.

The generators here all follow one pattern: take a few smaller point sets,
squash every coordinate of each except the first by a factor eps, place a
shrunken copy of each squashed set at a fixed offset along its own ray
through the origin, and recurse.  The rays positively span the space, so
once the copies are squashed flat enough the convex hull of any partially
peeled state picks up exactly one vertex per copy while every copy is
inhabited, namely the remaining point of that copy farthest from the
origin.  That structural claim is never assumed: each level searches a
halving schedule of eps candidates and accepts the first one under which
every node of the block tree passes exact verification.

Two geometric facts shape the code.  First, squashing an assembled level
as a whole is an invertible affine map, so it cannot change which points
are extreme in any state; the squash must hit the children before
placement, where it changes the assembly's shape non-affinely.  Second,
the farthest-point determinacy of peeling order concerns each copy's own
center: an embedded copy is an affine image of its canonical form, and
distances that order its points are measured from the image of its local
origin, which the builders track through every transform.

Ray directions are deliberately asymmetric: rays sharing a first
component would stack points from different copies onto a common vertical
hyperplane, a degeneracy no squash can repair.  The rays below have
pairwise distinct first components and disjoint offset windows, which
also keeps all first coordinates of a finished construction pairwise
distinct without any extra shear.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from typing import Iterator, Mapping, NamedTuple, Sequence

from peelcount.geometry import (
    CapacityError,
    DegeneracyError,
    PointSet,
    shear_parameter,
)
from peelcount.peeling import MAX_ENGINE_POINTS, Arena

EXHAUSTIVE_LIMIT = 12
DEFAULT_SAMPLES = 10_000
MAX_EPS_HALVINGS = 128
CHILD_SCALE = Fraction(1, 8)

Point = tuple[Fraction, ...]
# Node centers keyed by the node's sorted label tuple.
CenterMap = dict[tuple[int, ...], Point]

# Three planar rays with the origin interior to their positive span
# ((3,1) + (-1,2) + (-2,-3) = 0) and pairwise distinct first components.
PLANAR_DIRECTIONS: tuple[Point, ...] = (
    (Fraction(3), Fraction(1)),
    (Fraction(-1), Fraction(2)),
    (Fraction(-2), Fraction(-3)),
)


class CertificationError(RuntimeError):
    """A construction level failed to certify; signals a construction bug."""

    def __init__(self, message: str, report: "InvariantReport | None" = None):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class BlockTree:
    """Nested grouping of point labels.

    A node owns a set of labels; its children partition that set.  A leaf
    has no children.  The top-level children are the blocks the hull
    invariant quantifies over.
    """

    labels: tuple[int, ...]
    children: tuple["BlockTree", ...] = ()

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate labels in block")
        if not self.labels:
            raise ValueError("empty block")
        if self.children:
            merged: list[int] = []
            for child in self.children:
                merged.extend(child.labels)
            if sorted(merged) != sorted(self.labels):
                raise ValueError("children do not partition the parent labels")

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def walk(self) -> Iterator["BlockTree"]:
        """Preorder traversal."""
        yield self
        for child in self.children:
            yield from child.walk()

    def depth(self) -> int:
        if self.is_leaf:
            return 1
        return 1 + max(child.depth() for child in self.children)


@dataclass(frozen=True)
class Violation:
    """One failed state: which labels remained and what went wrong."""

    remaining: tuple[int, ...]
    extreme: tuple[int, ...]
    reason: str


@dataclass(frozen=True)
class InvariantReport:
    passed: bool
    mode: str
    arity: int
    states_checked: int
    samples_run: int | None
    violations: tuple[Violation, ...]


@dataclass(frozen=True)
class ConstructionSpec:
    """Parameters of a finished construction.

    ``k`` is the recursion depth for the self-similar families and None
    for the mixed-size family; ``n`` is always the point count; ``d`` the
    ambient dimension.  ``eps_schedule`` lists the certified squash
    factor of every recursion level, innermost first (for the mixed-size
    family: one entry per distinct certified sub-size, smallest first).
    """

    kind: str
    k: int | None
    n: int
    d: int
    eps_schedule: tuple[Fraction, ...]


@dataclass(frozen=True)
class Construction:
    """A built point set with its block tree, parameters, and certificate.

    ``centers`` records the affine image of every block's local origin in
    the final coordinates, keyed by sorted label tuple; distances that
    order peeling within a block are measured from its center.
    """

    points: PointSet
    blocks: BlockTree
    spec: ConstructionSpec
    certification: InvariantReport
    centers: tuple[tuple[tuple[int, ...], Point], ...]

    def center_map(self) -> CenterMap:
        return dict(self.centers)


def _center_key(labels: Sequence[int]) -> tuple[int, ...]:
    return tuple(sorted(labels))


def verify_invariant(
    ps: PointSet,
    blocks: BlockTree,
    mode: str = "exhaustive",
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    center: Point | None = None,
    assume_general_position: bool = False,
) -> InvariantReport:
    """Check the one-hull-vertex-per-block invariant over peeling states.

    A state is a subset of the points reachable by repeatedly deleting
    hull vertices, restricted to states where every top-level block of
    ``blocks`` still has a point.  The invariant demands each such state
    have exactly one hull vertex per block, and that the vertex be the
    block's remaining point farthest from ``center`` (default: the
    origin).  A tie is a failure: peeling order within a block must be
    determined by distance alone.

    Exhaustive mode visits every reachable qualifying state once.
    Sampled mode runs ``samples`` random deletion walks from the full
    set, caching per-state verdicts so repeat visits cost nothing.  Both
    stop at the first violation.
    """
    if mode not in ("exhaustive", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")
    if sorted(blocks.labels) != sorted(ps.labels):
        raise ValueError("block tree labels do not match the point set")
    top = blocks.children if blocks.children else (blocks,)

    arena = Arena(ps, assume_general_position=assume_general_position)
    if center is None:
        norms = arena.norms
    else:
        if len(center) != ps.dim:
            raise ValueError("center dimension does not match the point set")
        norms = [sum((c - z) ** 2 for c, z in zip(pt, center)) for pt in arena.coords]
    arity = len(top)
    block_of = [0] * ps.n
    block_masks = []
    block_indices: list[list[int]] = []
    for bi, block in enumerate(top):
        idxs = [ps.index_of(lab) for lab in block.labels]
        block_indices.append(idxs)
        bm = 0
        for i in idxs:
            bm |= 1 << i
            block_of[i] = bi
        block_masks.append(bm)
    full = arena.full_mask

    def is_active(mask: int) -> bool:
        return all(mask & bm for bm in block_masks)

    def check(mask: int, hint: int) -> tuple[tuple[int, ...], int, Violation | None]:
        ext = arena.extreme_indices(mask, hint)
        ext_mask = 0
        for i in ext:
            ext_mask |= 1 << i
        labels_rem = arena.labels_of_mask(mask)
        labels_ext = arena.labels_of_mask(ext_mask)
        if len(ext) != arity:
            return ext, ext_mask, Violation(
                labels_rem, labels_ext,
                f"state has {len(ext)} hull vertices, expected {arity}",
            )
        per_block = [0] * arity
        rep = [0] * arity
        for i in ext:
            per_block[block_of[i]] += 1
            rep[block_of[i]] = i
        if any(c != 1 for c in per_block):
            return ext, ext_mask, Violation(
                labels_rem, labels_ext, "hull vertices are not one per block"
            )
        for bi in range(arity):
            alive = [i for i in block_indices[bi] if mask >> i & 1]
            best = max(norms[i] for i in alive)
            hits = [i for i in alive if norms[i] == best]
            if len(hits) > 1:
                return ext, ext_mask, Violation(
                    labels_rem, labels_ext,
                    "farthest remaining point of a block is not unique",
                )
            if hits[0] != rep[bi]:
                return ext, ext_mask, Violation(
                    labels_rem, labels_ext,
                    "hull vertex of a block is not its farthest remaining point",
                )
        return ext, ext_mask, None

    violations: list[Violation] = []
    states_checked = 0
    samples_run: int | None = None

    if mode == "exhaustive":
        seen = {full}
        queue: deque[tuple[int, int]] = deque([(full, 0)])
        while queue:
            mask, hint = queue.popleft()
            ext, ext_mask, viol = check(mask, hint)
            states_checked += 1
            if viol is not None:
                violations.append(viol)
                break
            for i in ext:
                child = mask ^ (1 << i)
                if child not in seen and is_active(child):
                    seen.add(child)
                    queue.append((child, ext_mask ^ (1 << i)))
    else:
        rng = random.Random(seed)
        verdicts: dict[int, tuple[tuple[int, ...], int]] = {}
        samples_run = 0
        for _ in range(samples):
            samples_run += 1
            mask, hint = full, 0
            while True:
                known = verdicts.get(mask)
                if known is None:
                    ext, ext_mask, viol = check(mask, hint)
                    states_checked += 1
                    if viol is not None:
                        violations.append(viol)
                        break
                    verdicts[mask] = (ext, ext_mask)
                else:
                    ext, ext_mask = known
                i = rng.choice(ext)
                child = mask ^ (1 << i)
                if not is_active(child):
                    break
                mask, hint = child, ext_mask ^ (1 << i)
            if violations:
                break

    return InvariantReport(
        passed=not violations,
        mode=mode,
        arity=arity,
        states_checked=states_checked,
        samples_run=samples_run,
        violations=tuple(violations),
    )


def _auto_mode(n: int) -> str:
    return "exhaustive" if n <= EXHAUSTIVE_LIMIT else "sampled"


def verify_all_levels(
    ps: PointSet,
    blocks: BlockTree,
    centers: Mapping[tuple[int, ...], Point] | None = None,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    assume_general_position: bool = False,
) -> tuple[tuple[BlockTree, InvariantReport], ...]:
    """Run verify_invariant at every internal node of the block tree.

    Each node is checked on the sub-point-set it owns, against its own
    child partition, measuring distances from the node's center (origin
    when ``centers`` has no entry), exhaustively up to 12 points and
    sampled beyond.  Stops after the first failing node.
    """
    results: list[tuple[BlockTree, InvariantReport]] = []
    for node in blocks.walk():
        if node.is_leaf:
            continue
        sub = ps if len(node.labels) == ps.n else ps.subset(node.labels)
        # A subset of a general-position set is in general position.
        trusted = assume_general_position or sub.n < ps.n
        center = centers.get(_center_key(node.labels)) if centers else None
        report = verify_invariant(
            sub, node, mode=_auto_mode(sub.n), samples=samples, seed=seed,
            center=center, assume_general_position=trusted,
        )
        results.append((node, report))
        if not report.passed:
            break
    return tuple(results)


def _flatten_point(pt: Point, eps: Fraction) -> Point:
    return (pt[0],) + tuple(eps * c for c in pt[1:])


def _flatten_coords(coords: Sequence[Point], eps: Fraction) -> tuple[Point, ...]:
    return tuple(_flatten_point(pt, eps) for pt in coords)


def certify_epsilon(
    raw: PointSet,
    blocks: BlockTree,
    arity: int | None = None,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    max_halvings: int = MAX_EPS_HALVINGS,
) -> Fraction:
    """Largest eps = 2^-t (t minimal, t <= max_halvings) certifying ``raw``.

    Squashes all but the first coordinate of the whole set by each
    candidate in turn and returns the first eps under which the top-level
    partition of ``blocks`` passes verify_invariant.  Squashing the whole
    set is affine, so only the distance-determinacy half of the invariant
    can respond to eps here; a hull-structure violation in ``raw``
    persists through every candidate and ends in CertificationError.
    """
    top = blocks.children if blocks.children else (blocks,)
    if arity is not None and len(top) != arity:
        raise ValueError(f"block tree has {len(top)} top blocks, expected {arity}")
    mode = _auto_mode(raw.n)
    last_report: InvariantReport | None = None
    for t in range(max_halvings + 1):
        eps = Fraction(1, 1 << t)
        flat = PointSet(raw.dim, raw.labels, _flatten_coords(raw.coords, eps))
        try:
            report = verify_invariant(flat, blocks, mode=mode, samples=samples, seed=seed)
        except DegeneracyError:
            # Whole-set squashing scales orientation determinants by powers
            # of eps, so degeneracy will not clear at a smaller candidate.
            raise CertificationError(
                "the set is degenerate; no whole-set eps can repair it"
            ) from None
        if report.passed:
            return eps
        last_report = report
    raise CertificationError(
        f"no eps of the form 2^-t with t <= {max_halvings} certifies the set "
        f"({raw.n} points, dim {raw.dim})",
        last_report,
    )


def _shift_tree(tree: BlockTree, delta: int) -> BlockTree:
    return BlockTree(
        tuple(lab + delta for lab in tree.labels),
        tuple(_shift_tree(child, delta) for child in tree.children),
    )


def _place_point(
    pt: Point, direction: Point, offset: Fraction, scale: Fraction,
    transverse: Fraction,
) -> Point:
    # Ray parameter comes from the local first coordinate; the remaining
    # local axes map to ambient axes 2..d so a later squash reaches them.
    # ``transverse`` additionally scales those axes: identical copies with
    # equal transverse parts would make every same-labeled pair of pairs
    # across two copies exactly coplanar in three or more dimensions, an
    # eps-proof degeneracy; a distinct factor per copy breaks the identity.
    t = offset + scale * pt[0]
    out = [t * u for u in direction]
    for j in range(1, len(pt)):
        out[j] += scale * transverse * pt[j]
    return tuple(out)


class _Canon(NamedTuple):
    coords: tuple[Point, ...]
    tree: BlockTree
    centers: CenterMap
    schedule: tuple[tuple[int, Fraction], ...]
    report: InvariantReport


def _assemble(
    children: Sequence[tuple[tuple[Point, ...], BlockTree, CenterMap]],
    directions: Sequence[Point],
    offsets: Sequence[Fraction],
) -> tuple[tuple[Point, ...], BlockTree, CenterMap]:
    coords: list[Point] = []
    subtrees = []
    centers: CenterMap = {}
    base = 0
    for ci, ((child_coords, child_tree, child_centers), direction, offset) in enumerate(
        zip(children, directions, offsets, strict=True)
    ):
        trans = Fraction(1, ci + 1)
        coords.extend(
            _place_point(pt, direction, offset, CHILD_SCALE, trans)
            for pt in child_coords
        )
        subtrees.append(_shift_tree(child_tree, base))
        for key, pt in child_centers.items():
            centers[tuple(lab + base for lab in key)] = _place_point(
                pt, direction, offset, CHILD_SCALE, trans
            )
        base += len(child_coords)
    tree = BlockTree(tuple(range(base)), tuple(subtrees))
    dim = len(directions[0])
    centers[_center_key(tree.labels)] = tuple(Fraction(0) for _ in range(dim))
    return tuple(coords), tree, centers


def _scale_all(
    coords: tuple[Point, ...], centers: CenterMap, factor: Fraction
) -> tuple[tuple[Point, ...], CenterMap]:
    scaled = tuple(tuple(c * factor for c in pt) for pt in coords)
    return scaled, {k: tuple(c * factor for c in pt) for k, pt in centers.items()}


def _simplex_directions(d: int) -> tuple[Point, ...]:
    # d+1 rays positively spanning R^d: rows of (d+1)*I - J and the
    # all-minus-ones ray, plus two zero-sum adjustments.  The first-axis
    # one makes first components pairwise distinct (stacked equal first
    # components would be an eps-proof vertical degeneracy); the
    # second-axis one separates the transverse parts of the first and
    # last rays, which the base pattern leaves identical and which would
    # otherwise pin same-labeled points of two copies into a common
    # two-plane through the origin.
    adjust = [0] * (d + 1)
    for i in range(1, d + 1):
        adjust[i] = i + 1
    adjust[0] = -sum(adjust)
    rows = []
    for i in range(d):
        row = [Fraction(-1)] * d
        row[i] = Fraction(d)
        row[0] += adjust[i]
        rows.append(row)
    last = [Fraction(-1)] * d
    last[0] += adjust[d]
    rows.append(last)
    rows[0][1] -= 1
    rows[-1][1] += 1
    return tuple(tuple(row) for row in rows)


def _certified_level(
    children: Sequence[_Canon],
    directions: Sequence[Point],
    offsets: Sequence[Fraction],
    dim: int,
) -> tuple[Fraction, tuple[Point, ...], BlockTree, CenterMap, InvariantReport]:
    """Find the child squash factor certifying one assembly level.

    Tries eps = 1, 1/2, 1/4, ...; each candidate squashes every child
    copy before placement (squashing after assembly would be affine and
    could never fix hull structure), assembles the level, and accepts the
    first candidate under which every node of the assembled block tree
    verifies from its own center.  Degenerate candidates are skipped: the
    squash enters the assembly's orientation determinants non-trivially,
    so a collision at one eps can clear at another.
    """
    last_report: InvariantReport | None = None
    for t in range(MAX_EPS_HALVINGS + 1):
        eps = Fraction(1, 1 << t)
        squashed = [
            (
                _flatten_coords(child.coords, eps),
                child.tree,
                {k: _flatten_point(pt, eps) for k, pt in child.centers.items()},
            )
            for child in children
        ]
        raw_coords, tree, centers = _assemble(squashed, directions, offsets)
        try:
            raw = PointSet(dim, tuple(range(len(raw_coords))), raw_coords)
            results = verify_all_levels(raw, tree, centers)
        except (ValueError, DegeneracyError):
            continue
        if all(rep.passed for _, rep in results):
            root_report = results[0][1]
            # Uniform rescale so first coordinates span at most [-1, 1];
            # keeps placement arithmetic at the same magnitudes per level.
            m = max(abs(pt[0]) for pt in raw_coords)
            coords, centers = (
                _scale_all(raw.coords, centers, 1 / m) if m not in (0, 1)
                else (raw.coords, centers)
            )
            return eps, coords, tree, centers, root_report
        last_report = results[-1][1]
    raise CertificationError(
        "no child squash of the form 2^-t with t <= "
        f"{MAX_EPS_HALVINGS} certifies the level "
        f"({sum(len(c.coords) for c in children)} points, dim {dim})",
        last_report,
    )


def _singleton_canon(dim: int) -> _Canon:
    tree = BlockTree((0,))
    origin = tuple(Fraction(0) for _ in range(dim))
    ps = PointSet(dim, (0,), (origin,))
    report = verify_invariant(ps, tree)
    return _Canon(ps.coords, tree, {(0,): origin}, (), report)


@cache
def _canonical_ternary(level: int) -> _Canon:
    if level == 0:
        return _singleton_canon(2)
    sub = _canonical_ternary(level - 1)
    eps, coords, tree, centers, report = _certified_level(
        (sub, sub, sub), PLANAR_DIRECTIONS, (Fraction(1),) * 3, 2
    )
    return _Canon(coords, tree, centers, sub.schedule + ((level, eps),), report)


@cache
def _canonical_threeblock(n: int) -> _Canon:
    if n == 1:
        return _singleton_canon(2)
    if n == 2:
        tree = BlockTree((0, 1), (BlockTree((0,)), BlockTree((1,))))
        ps = PointSet(2, (0, 1), ((Fraction(-1), Fraction(0)), (Fraction(1), Fraction(0))))
        report = verify_invariant(ps, tree)
        zero = (Fraction(0), Fraction(0))
        return _Canon(ps.coords, tree, {(0, 1): zero}, (), report)
    q, r = divmod(n, 3)
    sizes = [q + (1 if i < r else 0) for i in range(3)]
    children = [_canonical_threeblock(s) for s in sizes]
    # Two blocks sit just past the origin, the third far out along its ray.
    offsets = (Fraction(1), Fraction(1), Fraction(8))
    eps, coords, tree, centers, report = _certified_level(
        children, PLANAR_DIRECTIONS, offsets, 2
    )
    merged: dict[int, Fraction] = {}
    for child in children:
        merged.update(dict(child.schedule))
    merged[n] = eps
    return _Canon(coords, tree, centers, tuple(sorted(merged.items())), report)


@cache
def _canonical_simplex(dim: int, level: int) -> _Canon:
    if level == 0:
        return _singleton_canon(dim)
    sub = _canonical_simplex(dim, level - 1)
    eps, coords, tree, centers, report = _certified_level(
        (sub,) * (dim + 1),
        _simplex_directions(dim),
        (Fraction(1),) * (dim + 1),
        dim,
    )
    return _Canon(coords, tree, centers, sub.schedule + ((level, eps),), report)


def _finish(kind: str, k: int | None, dim: int, canon: _Canon) -> Construction:
    n = len(canon.coords)
    ps = PointSet(dim, tuple(range(n)), canon.coords)
    # The asymmetric rays leave first coordinates pairwise distinct; a
    # violation here means the ray table was edited carelessly.
    if shear_parameter(ps) != 0:
        raise CertificationError(
            f"{kind} construction with {n} points lacks distinct first coordinates"
        )
    spec = ConstructionSpec(kind, k, n, dim, tuple(eps for _, eps in canon.schedule))
    centers = tuple(sorted(canon.centers.items()))
    return Construction(ps, canon.tree, spec, canon.report, centers)


def _check_capacity(n: int) -> None:
    if n > MAX_ENGINE_POINTS:
        raise CapacityError(
            f"construction would have {n} points, limit {MAX_ENGINE_POINTS}"
        )


def build_ternary(k: int) -> Construction:
    """Self-similar planar family: three shrunken copies per level, 3^k points."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    _check_capacity(3 ** k)
    return _finish("ternary", k, 2, _canonical_ternary(k))


def build_threeblock(n: int) -> Construction:
    """Planar family of any size n >= 1: blocks of floor/ceil thirds, one far ray."""
    if n < 1:
        raise ValueError("n must be positive")
    _check_capacity(n)
    return _finish("threeblock", None, 2, _canonical_threeblock(n))


def build_simplex(d: int, k: int) -> Construction:
    """d-dimensional family: d+1 shrunken copies per level, (d+1)^k points."""
    if d < 2:
        raise ValueError("d must be at least 2")
    if k < 0:
        raise ValueError("k must be nonnegative")
    _check_capacity((d + 1) ** k)
    return _finish("simplex", k, d, _canonical_simplex(d, k))
