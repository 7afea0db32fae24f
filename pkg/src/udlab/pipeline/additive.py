"""Small-doubling subsets and generalized arithmetic progressions.

Lattice work (Hermite normal form, LLL) is written out here; the inputs are
planar so matrices have two columns and at most a few hundred rows.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .. import kernels
from ..exactgeom import Point, as_rational
from ..pointsets import PointSet
from .paths import HSet

# ---------------------------------------------------------------------------
# integer lattices


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style HNF of an integer matrix; returns the nonzero rows only."""
    A = [list(map(int, r)) for r in rows]
    if not A:
        return []
    ncols = len(A[0])
    r = 0
    for c in range(ncols):
        # euclid down column c among rows r.. until a single nonzero remains
        while True:
            nz = [i for i in range(r, len(A)) if A[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(A[i][c]))
            A[r], A[piv] = A[piv], A[r]
            done = True
            for i in range(r + 1, len(A)):
                if A[i][c]:
                    q = A[i][c] // A[r][c]
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                    if A[i][c]:
                        done = False
            if done:
                break
        if r < len(A) and A[r][c] != 0:
            if A[r][c] < 0:
                A[r] = [-a for a in A[r]]
            for i in range(r):
                q = A[i][c] // A[r][c]
                A[i] = [a - q * b for a, b in zip(A[i], A[r])]
            r += 1
            if r == len(A):
                break
    return [row for row in A[:r] if any(row)]


def lll_reduce(basis: Sequence[Sequence[int]], delta: Fraction = Fraction(3, 4)) -> list[list[int]]:
    """LLL-reduce linearly independent integer rows (exact rational Gram-Schmidt)."""
    B = [list(map(int, b)) for b in basis]
    n = len(B)
    if n <= 1:
        return B

    def dot(u, v):
        return sum(a * b for a, b in zip(u, v))

    def gso():
        Bs: list[list[Fraction]] = []
        mu = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            v = [Fraction(x) for x in B[i]]
            for j in range(i):
                mu[i][j] = dot(B[i], Bs[j]) / dot(Bs[j], Bs[j])
                v = [a - mu[i][j] * b for a, b in zip(v, Bs[j])]
            Bs.append(v)
        return Bs, mu

    Bs, mu = gso()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                B[k] = [a - q * b for a, b in zip(B[k], B[j])]
                Bs, mu = gso()
        if dot(Bs[k], Bs[k]) >= (delta - mu[k][k - 1] ** 2) * dot(Bs[k - 1], Bs[k - 1]):
            k += 1
        else:
            B[k], B[k - 1] = B[k - 1], B[k]
            Bs, mu = gso()
            k = max(k - 1, 1)
    return B


def _solve_int(basis: list[list[int]], v: Sequence[int]) -> list[Fraction]:
    """Coordinates of v in a basis of rank 1 or 2 (planar vectors)."""
    if len(basis) == 1:
        (bx, by), (vx, vy) = basis[0], v
        t = Fraction(vx, bx) if bx else Fraction(vy, by)
        if t * bx != vx or t * by != vy:
            raise ValueError("vector not in span")
        return [t]
    (ax, ay), (bx, by) = basis
    det = ax * by - ay * bx
    vx, vy = v
    return [Fraction(vx * by - vy * bx, det), Fraction(ax * vy - ay * vx, det)]


# ---------------------------------------------------------------------------
# generalized arithmetic progressions


@dataclass(frozen=True)
class GapModel:
    """{base + sum a_i * generators[i] : 0 <= a_i < lengths[i]}."""

    base: Point
    generators: tuple[Point, ...]
    lengths: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "base", Point.of(*self.base))
        object.__setattr__(self, "generators", tuple(Point.of(*g) for g in self.generators))
        object.__setattr__(self, "lengths", tuple(int(l) for l in self.lengths))
        if len(self.generators) != len(self.lengths):
            raise ValueError("one length per generator")
        if any(l < 1 for l in self.lengths):
            raise ValueError("lengths must be positive")

    @classmethod
    def box(cls, N: int) -> "GapModel":
        """{a + b i : 0 <= a, b < N} as a 2-dimensional GAP."""
        return cls((0, 0), ((1, 0), (0, 1)), (N, N))

    @property
    def dimension(self) -> int:
        return len(self.generators)

    @property
    def size(self) -> int:
        return math.prod(self.lengths)

    def elements(self) -> Iterator[Point]:
        for coeffs in itertools.product(*(range(l) for l in self.lengths)):
            x, y = self.base
            for a, g in zip(coeffs, self.generators):
                x += a * g.x
                y += a * g.y
            yield Point(x, y)

    def element_set(self) -> set[Point]:
        return set(self.elements())

    def _independent(self) -> bool:
        g = self.generators
        if len(g) == 0:
            return True
        if len(g) == 1:
            return g[0] != (0, 0)
        if len(g) == 2:
            return g[0].x * g[1].y - g[0].y * g[1].x != 0
        return False

    def contains(self, p) -> bool:
        p = Point.of(*p)
        if not self._independent():
            return p in self.element_set()
        v = p - self.base
        if self.dimension == 0:
            return v == (0, 0)
        g = self.generators
        if self.dimension == 1:
            (gx, gy), (vx, vy) = g[0], v
            t = vx / gx if gx else vy / gy
            coeffs = [t] if (t * gx == vx and t * gy == vy) else None
        else:
            det = g[0].x * g[1].y - g[0].y * g[1].x
            coeffs = [(v.x * g[1].y - v.y * g[1].x) / det, (g[0].x * v.y - g[0].y * v.x) / det]
        if coeffs is None:
            return False
        return all(c.denominator == 1 and 0 <= c < l for c, l in zip(coeffs, self.lengths))


def _box_for(coords: list[list[Fraction]]) -> tuple[list[int], list[int]]:
    lo = [int(min(c[k] for c in coords)) for k in range(len(coords[0]))]
    hi = [int(max(c[k] for c in coords)) for k in range(len(coords[0]))]
    return lo, [h - l + 1 for l, h in zip(lo, hi)]


def gap_fit(Pp: Iterable) -> GapModel:
    """Cover a planar point set by a GAP on a reduced basis of its difference lattice.

    Coordinates are scaled to integers, the lattice spanned by differences
    from the first point is put in Hermite normal form and LLL-reduced; among
    the reduced basis and its neighbours under small unimodular changes, the
    basis whose coefficient box is smallest wins.
    """
    pts = list(PointSet(Pp))
    if not pts:
        raise ValueError("gap_fit needs at least one point")
    L = math.lcm(1, *(c.denominator for p in pts for c in p))
    ipts = [(int(p.x * L), int(p.y * L)) for p in pts]
    x0, y0 = ipts[0]
    diffs = [(x - x0, y - y0) for x, y in ipts[1:]]
    basis = hermite_normal_form(diffs) if diffs else []
    if not basis:
        return GapModel(pts[0], (), ())
    basis = lll_reduce(basis)
    candidates = [basis]
    if len(basis) == 2:
        b1, b2 = basis
        for a, b, c, d in itertools.product((-1, 0, 1), repeat=4):
            if a * d - b * c in (1, -1) and (a, b, c, d) != (1, 0, 0, 1):
                candidates.append([[a * b1[0] + b * b2[0], a * b1[1] + b * b2[1]], [c * b1[0] + d * b2[0], c * b1[1] + d * b2[1]]])
    best = None
    for cand in candidates:
        coords = [_solve_int(cand, (x - x0, y - y0)) for x, y in ipts]
        lo, lengths = _box_for(coords)
        key = (math.prod(lengths), _basis_key(cand))
        if best is None or key < best[0]:
            best = (key, cand, lo, lengths)
    _, cand, lo, lengths = best
    gens = [Point(Fraction(g[0], L), Fraction(g[1], L)) for g in cand]
    bx = Fraction(x0, L) + sum(l * g.x for l, g in zip(lo, gens))
    by = Fraction(y0, L) + sum(l * g.y for l, g in zip(lo, gens))
    order = sorted(range(len(gens)), key=lambda k: _vec_key(cand[k]))
    return GapModel(Point(bx, by), tuple(gens[k] for k in order), tuple(lengths[k] for k in order))


def _vec_key(v) -> tuple:
    return (v[0] * v[0] + v[1] * v[1], abs(v[1]), -v[0])


def _basis_key(basis) -> tuple:
    # prefer short vectors with non-negative leading coordinates
    return tuple(sorted((_vec_key(v), v[0] < 0 or (v[0] == 0 and v[1] < 0)) for v in basis))


# ---------------------------------------------------------------------------
# Balog-Szemeredi-Gowers style subset search


def doubling(points: Sequence[Point]) -> Fraction:
    """|A - A| / |A| computed exactly."""
    if not points:
        raise ValueError("empty set")
    L = math.lcm(1, *(c.denominator for p in points for c in p))
    X = np.array([int(p.x * L) for p in points], dtype=np.int64)
    Y = np.array([int(p.y * L) for p in points], dtype=np.int64)
    if kernels.fits(X, Y, limit=1 << 30):
        size = kernels.difference_count(X, Y)
    else:
        size = len({(a.x - b.x, a.y - b.y) for a in points for b in points})
    return Fraction(size, len(points))


@dataclass(frozen=True)
class BSGResult:
    points: PointSet
    doubling: Fraction
    flagged: bool
    candidates: int


def bsg_subset(
    P: PointSet,
    H: Iterable[tuple[int, int]] | HSet,
    min_fraction=Fraction(1, 4),
    top_k: int = 8,
) -> BSGResult:
    """Search for a large subset of P with small doubling guided by the pairs H.

    Builds the graph on P with edge set H, peels vertices of degree below half
    the average until stable, then scores the core, P itself and, for each of
    the ``top_k`` most popular differences among core pairs, the union of the
    pairs realising it. The lowest |A - A| / |A| among candidates of size at
    least ``min_fraction * |P|`` wins (larger set on ties); if none is large
    enough the lowest-doubling candidate is returned with ``flagged`` set.
    """
    pairs = H.pairs if isinstance(H, HSet) else sorted(set(map(tuple, H)))
    if not pairs:
        raise ValueError("H must contain at least one pair")
    min_fraction = as_rational(min_fraction)
    nbrs: dict[int, set[int]] = {}
    for a, b in pairs:
        if a == b:
            continue
        nbrs.setdefault(a, set()).add(b)
        nbrs.setdefault(b, set()).add(a)
    core = set(nbrs)
    while core:
        deg = {v: len(nbrs[v] & core) for v in core}
        avg = Fraction(sum(deg.values()), len(core))
        keep = {v for v in core if 2 * deg[v] >= avg}
        if keep == core:
            break
        core = keep
    core_pairs = [(a, b) for a, b in pairs if a in core and b in core]
    diffs = Counter(P[a] - P[b] for a, b in core_pairs)
    popular = sorted(diffs, key=lambda d: (-diffs[d], d))[:top_k]
    cands: list[frozenset[int]] = []
    for c in [frozenset(core), frozenset(range(len(P)))] + [
        frozenset(v for a, b in core_pairs if P[a] - P[b] == d for v in (a, b)) for d in popular
    ]:
        if c and c not in cands:
            cands.append(c)
    need = min_fraction * len(P)
    scored = []
    for c in cands:
        idx = sorted(c)
        scored.append((doubling([P[i] for i in idx]), -len(idx), idx))
    big = [s for s in scored if -s[1] >= need]
    pool = big or scored
    dbl, _, idx = min(pool)
    return BSGResult(PointSet(P[i] for i in idx), dbl, not big, len(cands))
