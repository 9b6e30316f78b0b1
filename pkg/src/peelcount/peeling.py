"""Counting and enumerating hull-peeling removal orders.

A peeling sequence of a labeled point set removes one currently extreme
point per step until nothing is left.  The number of such sequences is
computed along two deliberately separated routes:

* ``count``: memoized recursion keyed on the bitmask of remaining points.
  Extreme sets come from a monotone chain (planar) or the exact convex
  combination LP (higher dimension), with two sound shortcuts: once every
  remaining point is extreme the tail contributes factorial(m) sequences,
  and a point that was extreme before a removal stays extreme after it,
  so only the previously interior points need re-testing.

* ``count_bruteforce``: plain recursion with no memo table, its own inline
  orientation determinant, and a gift-wrapping walk for the extreme set.
  It shares nothing with the engine path beyond Fraction arithmetic and
  serves as the independent oracle for small inputs.

States never hold more than 64 points (bitmask capacity guard).
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from peelcount.geometry import (
    CapacityError,
    DegeneracyError,
    PointSet,
    check_general_position,
    convex_combination_feasible,
    convex_layers,
    orientation,
    squared_norm,
)

MAX_ENGINE_POINTS = 64
MAX_BRUTEFORCE_POINTS = 12
MAX_ENUMERATE_POINTS = 12

PeelSequence = tuple[int, ...]


@dataclass(frozen=True)
class PeelState:
    """A set of still-present labels inside a fixed parent point set."""

    parent: PointSet
    remaining: frozenset[int]

    @property
    def size(self) -> int:
        return len(self.remaining)


class Arena:
    """Shared per-point-set machinery for the counting engine.

    Holds the coordinates, a lexicographic presort, a lazy orientation sign
    cache (planar), squared norms, and per-bitmask extreme sets.  General
    position is validated once at construction.
    """

    def __init__(self, ps: PointSet, assume_general_position: bool = False):
        if ps.n > MAX_ENGINE_POINTS:
            raise CapacityError("engine handles at most %d points, got %d" % (MAX_ENGINE_POINTS, ps.n))
        if not assume_general_position:
            check_general_position(ps)
        self.ps = ps
        self.n = ps.n
        self.dim = ps.dim
        self.coords = list(ps.coords)
        self.labels = list(ps.labels)
        self.full_mask = (1 << ps.n) - 1
        self.order = sorted(range(ps.n), key=lambda i: self.coords[i])
        self.norms = [squared_norm(c) for c in self.coords]
        self._orient_cache: dict[tuple[int, int, int], int] = {}
        self._ext_cache: dict[int, tuple[int, ...]] = {}
        self._memo: dict[int, int] = {}
        self._memo_lock = threading.Lock()

    # ---- orientation with canonicalized caching (planar) ----

    def orient(self, i: int, j: int, k: int) -> int:
        key, sign = _canon_triple(i, j, k)
        cached = self._orient_cache.get(key)
        if cached is None:
            cached = orientation(self.coords[key[0]], self.coords[key[1]], self.coords[key[2]])
            self._orient_cache[key] = cached
        return cached * sign

    # ---- extreme sets per remaining-bitmask ----

    def extreme_indices(self, mask: int, hint: int = 0) -> tuple[int, ...]:
        """Indices of hull vertices among the masked points, ascending.

        ``hint`` is a bitmask of points already known extreme (monotone:
        extremeness survives deletion of other points), consulted only on
        the LP path where each skipped query saves a full simplex run.
        """
        cached = self._ext_cache.get(mask)
        if cached is not None:
            return cached
        rem = [i for i in self.order if mask >> i & 1]
        m = len(rem)
        if m <= self.dim + 1:
            ext = tuple(sorted(rem))
        elif self.dim == 2:
            lower: list[int] = []
            for i in rem:
                while len(lower) >= 2 and self.orient(lower[-2], lower[-1], i) <= 0:
                    lower.pop()
                lower.append(i)
            upper: list[int] = []
            for i in reversed(rem):
                while len(upper) >= 2 and self.orient(upper[-2], upper[-1], i) <= 0:
                    upper.pop()
                upper.append(i)
            ext = tuple(sorted(lower[:-1] + upper[:-1]))
        else:
            ext = self._extreme_lp(rem, hint)
        self._ext_cache[mask] = ext
        return ext

    def _extreme_lp(self, rem: list[int], hint: int) -> tuple[int, ...]:
        known = set(i for i in rem if hint >> i & 1)
        # a unique maximizer or minimizer of any coordinate is extreme for free
        for axis in range(self.dim):
            for pick in (min, max):
                val = pick(self.coords[i][axis] for i in rem)
                hits = [i for i in rem if self.coords[i][axis] == val]
                if len(hits) == 1:
                    known.add(hits[0])
        out = []
        for i in rem:
            if i in known:
                out.append(i)
                continue
            others = [self.coords[j] for j in rem if j != i]
            if not convex_combination_feasible(self.coords[i], others):
                out.append(i)
        return tuple(sorted(out))

    # ---- memoized counting ----

    def count(self, threads: int = 1) -> int:
        if self.n == 0:
            return 1
        if threads <= 1:
            return self._count_rec(self.full_mask, 0)
        ext = self.extreme_indices(self.full_mask)
        if len(ext) == self.n:
            return factorial(self.n)
        ext_mask = 0
        for v in ext:
            ext_mask |= 1 << v
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(self._count_rec, self.full_mask ^ (1 << v), ext_mask ^ (1 << v))
                for v in ext
            ]
            total = sum(f.result() for f in futures)
        self._memo[self.full_mask] = total
        return total

    def _count_rec(self, mask: int, hint: int) -> int:
        if mask == 0:
            return 1
        got = self._memo.get(mask)
        if got is not None:
            return got
        ext = self.extreme_indices(mask, hint)
        m = mask.bit_count()
        if len(ext) == m:
            total = factorial(m)
        else:
            ext_mask = 0
            for v in ext:
                ext_mask |= 1 << v
            total = 0
            for v in ext:
                total += self._count_rec(mask ^ (1 << v), ext_mask ^ (1 << v))
        self._memo[mask] = total
        return total

    def labels_of_mask(self, mask: int) -> tuple[int, ...]:
        return tuple(sorted(self.labels[i] for i in range(self.n) if mask >> i & 1))


def _canon_triple(i: int, j: int, k: int) -> tuple[tuple[int, int, int], int]:
    # sort the triple, tracking permutation parity (orientation is alternating)
    sign = 1
    if i > j:
        i, j = j, i
        sign = -sign
    if j > k:
        j, k = k, j
        sign = -sign
    if i > j:
        i, j = j, i
        sign = -sign
    return (i, j, k), sign


def count(ps: PointSet, threads: int = 1) -> int:
    """Number of complete peeling sequences of the set (exact integer)."""
    return Arena(ps).count(threads=threads)


def count_bruteforce(ps: PointSet) -> int:
    """Unmemoized oracle count; guarded to at most 12 points.

    Planar extreme sets come from a gift-wrapping walk over a locally
    built orientation sign table.  For dimension three and up the exact
    convex combination LP decides extremeness (only the planar route is
    fully independent of the engine's machinery).
    """
    n = ps.n
    if n > MAX_BRUTEFORCE_POINTS:
        raise CapacityError("brute-force oracle handles at most %d points, got %d" % (MAX_BRUTEFORCE_POINTS, n))
    check_general_position(ps)
    if n == 0:
        return 1
    coords = list(ps.coords)

    if ps.dim == 2:
        table = [[[0] * n for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for j in range(n):
                if j == i:
                    continue
                for k in range(n):
                    if k == i or k == j:
                        continue
                    p, q, r = coords[i], coords[j], coords[k]
                    d = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
                    table[i][j][k] = 1 if d > 0 else -1

        def extreme(rem: list[int]) -> list[int]:
            if len(rem) <= 2:
                return list(rem)
            start = min(rem, key=lambda i: coords[i])
            hull = []
            p = start
            while True:
                hull.append(p)
                row = table[p]
                best = None
                for c in rem:
                    if c == p:
                        continue
                    if best is None or row[best][c] < 0:
                        best = c
                p = best
                if p == start:
                    break
            return hull
    else:

        def extreme(rem: list[int]) -> list[int]:
            if len(rem) <= ps.dim + 1:
                return list(rem)
            out = []
            for i in rem:
                others = [coords[j] for j in rem if j != i]
                if not convex_combination_feasible(coords[i], others):
                    out.append(i)
            return out

    def walk(rem: list[int]) -> int:
        if not rem:
            return 1
        total = 0
        for v in extreme(rem):
            total += walk([x for x in rem if x != v])
        return total

    return walk(list(range(n)))


def is_peeling_sequence(ps: PointSet, seq: PeelSequence) -> bool:
    """Whether seq is a complete valid removal order of the set."""
    if sorted(seq) != sorted(ps.labels):
        raise ValueError("sequence is not a permutation of the labels")
    arena = Arena(ps)
    mask = arena.full_mask
    for lab in seq:
        i = ps.index_of(lab)
        if i not in arena.extreme_indices(mask):
            return False
        mask ^= 1 << i
    return True


def enumerate_sequences(ps: PointSet, limit: int | None = None):
    """Yield peeling sequences in lexicographic label order.

    Without a finite limit the input is capped at 12 points; with one, the
    generator stops after ``limit`` sequences.
    """
    if limit is None and ps.n > MAX_ENUMERATE_POINTS:
        raise CapacityError("unbounded enumeration is capped at %d points" % MAX_ENUMERATE_POINTS)
    arena = Arena(ps)
    emitted = 0

    def rec(mask: int, prefix: list[int]):
        nonlocal emitted
        if limit is not None and emitted >= limit:
            return
        if mask == 0:
            emitted += 1
            yield tuple(prefix)
            return
        branches = sorted(arena.extreme_indices(mask), key=lambda i: arena.labels[i])
        for i in branches:
            if limit is not None and emitted >= limit:
                return
            prefix.append(arena.labels[i])
            yield from rec(mask ^ (1 << i), prefix)
            prefix.pop()

    yield from rec(arena.full_mask, [])


_SYMBOLS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"


def simplify(ps: PointSet, blocks, seq: PeelSequence) -> str:
    """Project a peeling sequence onto block symbols.

    ``blocks`` is a partition of the labels, given as an ordered collection
    of label collections; the i-th block maps to the i-th symbol of
    a..z A..Z 0..9 (at most 62 blocks).
    """
    block_lists = [tuple(b) for b in blocks]
    flat = [lab for b in block_lists for lab in b]
    if sorted(flat) != sorted(ps.labels):
        raise ValueError("blocks do not partition the labels")
    if len(block_lists) > len(_SYMBOLS):
        raise ValueError("too many blocks to symbolize")
    if sorted(seq) != sorted(ps.labels):
        raise ValueError("sequence is not a permutation of the labels")
    symbol_of = {}
    for sym, b in zip(_SYMBOLS, block_lists):
        for lab in b:
            symbol_of[lab] = sym
    return "".join(symbol_of[lab] for lab in seq)


def induced_subsequence(seq: PeelSequence, subset) -> PeelSequence:
    """Order that a peeling of the whole set imposes on a subset of labels."""
    keep = set(subset)
    unknown = keep - set(seq)
    if unknown:
        raise ValueError("labels %s do not occur in the sequence" % sorted(unknown))
    return tuple(lab for lab in seq if lab in keep)


def extend_peeling(ps: PointSet, subset, sub_seq: PeelSequence) -> PeelSequence:
    """Greedily lift a peeling of a subset to a peeling of the whole set.

    At each step: if the next unremoved subset point is currently extreme,
    remove it; otherwise remove the smallest-labeled extreme point outside
    the subset.  Such a point always exists: were every extreme point of
    the remainder a subset point other than the next one, the remainder
    (next point included) would sit inside the hull of the other remaining
    subset points, contradicting that the next point is extreme within the
    remaining subset.  The result restricts back to ``sub_seq`` exactly.
    """
    keep = set(subset)
    if sorted(sub_seq) != sorted(keep):
        raise ValueError("sub_seq is not a permutation of the subset")
    sub_ps = ps.subset(keep)
    if not is_peeling_sequence(sub_ps, sub_seq):
        raise ValueError("sub_seq is not a valid peeling of the subset")
    arena = Arena(ps)
    mask = arena.full_mask
    pos = 0
    out = []
    while mask:
        ext = arena.extreme_indices(mask)
        if pos < len(sub_seq):
            nxt = ps.index_of(sub_seq[pos])
            if nxt in ext:
                out.append(sub_seq[pos])
                pos += 1
                mask ^= 1 << nxt
                continue
        outside = [i for i in ext if arena.labels[i] not in keep]
        if not outside:
            raise AssertionError("no extreme point outside the subset; extension invariant broken")
        i = min(outside, key=lambda x: arena.labels[x])
        out.append(arena.labels[i])
        mask ^= 1 << i
    return tuple(out)


def count_layer_sequences(ps: PointSet) -> int:
    """Product of factorials of the onion layer sizes (planar).

    Counts the peelings that exhaust each convex layer completely before
    touching the next one; every such order is a valid peeling, so this is
    a lower bound for the full count.
    """
    decomposition = convex_layers(ps)
    total = 1
    for size in decomposition.sizes:
        total *= factorial(size)
    return total
