"""Unit-distance graphs: enumeration, direction spectra, restriction and pruning."""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, NamedTuple

from . import kernels
from .exactgeom import as_rational, format_rational, rational_sqrt
from .pointsets import PointSet

__all__ = [
    "Direction",
    "Edge",
    "UDGraph",
    "canonical_direction",
    "unit_pairs",
    "unit_pairs_bruteforce",
    "direction_spectrum",
    "top_directions",
    "restrict_directions",
    "prune_min_degree",
    "write_edges",
    "write_spectrum",
]


class Direction(NamedTuple):
    """Primitive integer vector up to sign; first nonzero coordinate positive."""

    dx: int
    dy: int


def canonical_direction(v) -> Direction:
    x, y = as_rational(v[0]), as_rational(v[1])
    if x == 0 and y == 0:
        raise ValueError("zero vector has no direction")
    L = math.lcm(x.denominator, y.denominator)
    ix, iy = int(x * L), int(y * L)
    g = math.gcd(ix, iy)
    ix, iy = ix // g, iy // g
    if ix < 0 or (ix == 0 and iy < 0):
        ix, iy = -ix, -iy
    return Direction(ix, iy)


class Edge(NamedTuple):
    i: int
    j: int
    direction: Direction


@dataclass(frozen=True)
class UDGraph:
    """Unit-distance graph on (a subset of) ``points``.

    ``vertices`` are indices into ``points``; ``edges`` are sorted with i < j.
    """

    points: PointSet
    r_sq: Fraction
    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]
    _adj: dict = field(default=None, init=False, repr=False, compare=False)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def adjacency(self) -> dict[int, list[int]]:
        if self._adj is None:
            adj: dict[int, list[int]] = {v: [] for v in self.vertices}
            for i, j, _ in self.edges:
                adj[i].append(j)
                adj[j].append(i)
            object.__setattr__(self, "_adj", adj)
        return self._adj

    def degrees(self) -> dict[int, int]:
        return {v: len(nb) for v, nb in self.adjacency().items()}

    def induced_points(self) -> PointSet:
        return PointSet(self.points[v] for v in self.vertices)


def _make_graph(P: PointSet, r_sq: Fraction, pairs: Iterable[tuple[int, int]], vertices=None) -> UDGraph:
    edges = []
    for i, j in pairs:
        edges.append(Edge(i, j, canonical_direction(P[j] - P[i])))
    edges.sort()
    verts = tuple(range(len(P))) if vertices is None else tuple(vertices)
    return UDGraph(P, r_sq, verts, tuple(edges))


def _width_bound(r_sq: Fraction) -> Fraction:
    """A rational w >= sqrt(r_sq), exact when r_sq is a square."""
    root = rational_sqrt(r_sq)
    if root is not None:
        return root
    p, q = r_sq.numerator, r_sq.denominator
    return Fraction(math.isqrt(p * q) + 1, q)


def _unit_pairs_exact(P: PointSet, r_sq: Fraction) -> list[tuple[int, int]]:
    w = _width_bound(r_sq)
    buckets: dict[tuple[int, int], list[int]] = {}
    for i, p in enumerate(P):
        buckets.setdefault((math.floor(p.x / w), math.floor(p.y / w)), []).append(i)
    out = []
    for (bx, by), members in buckets.items():
        for ox in (-1, 0, 1):
            for oy in (-1, 0, 1):
                for j in buckets.get((bx + ox, by + oy), ()):
                    for i in members:
                        if i < j and P[i].dist_sq(P[j]) == r_sq:
                            out.append((i, j))
    return out


def unit_pairs(P: PointSet, r_sq) -> UDGraph:
    """All unordered pairs of P at squared distance exactly r_sq (bucketed search)."""
    r_sq = as_rational(r_sq)
    if r_sq <= 0:
        raise ValueError("r_sq must be positive")
    ic = P.integer_coords
    L2 = P.denominator ** 2
    scaled = r_sq * L2
    if ic is not None and scaled.denominator == 1 and scaled < kernels.COORD_LIMIT ** 2:
        I, J = kernels.unit_pairs(ic[0], ic[1], int(scaled))
        pairs = zip(I.tolist(), J.tolist())
    elif ic is not None and scaled.denominator != 1:
        pairs = []  # scaled squared distances are integers, so none can match
    else:
        pairs = _unit_pairs_exact(P, r_sq)
    return _make_graph(P, r_sq, pairs)


def unit_pairs_bruteforce(P: PointSet, r_sq) -> UDGraph:
    """O(n^2) scan over all pairs with exact Fraction arithmetic."""
    r_sq = as_rational(r_sq)
    pts = list(P)
    pairs = [(i, j) for i in range(len(pts)) for j in range(i + 1, len(pts)) if pts[i].dist_sq(pts[j]) == r_sq]
    return _make_graph(P, r_sq, pairs)


def direction_spectrum(G: UDGraph) -> dict[Direction, int]:
    return dict(sorted(Counter(e.direction for e in G.edges).items()))


def top_directions(spectrum: dict[Direction, int], k: int) -> set[Direction]:
    """The k most frequent directions; ties go to the lexicographically smaller (dx, dy)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    ranked = sorted(spectrum.items(), key=lambda kv: (-kv[1], kv[0]))
    return {d for d, _ in ranked[:k]}


def restrict_directions(G: UDGraph, D: Iterable[Direction]) -> UDGraph:
    D = {Direction(*d) for d in D}
    edges = tuple(e for e in G.edges if e.direction in D)
    return UDGraph(G.points, G.r_sq, G.vertices, edges)


def prune_min_degree(G: UDGraph, t: int) -> UDGraph:
    """Largest induced subgraph with minimum degree >= t (the t-core)."""
    if t < 0:
        raise ValueError("t must be >= 0")
    if t == 0:
        return G
    adj = G.adjacency()
    deg = {v: len(nb) for v, nb in adj.items()}
    alive = set(G.vertices)
    queue = deque(sorted(v for v in alive if deg[v] < t))
    while queue:
        v = queue.popleft()
        if v not in alive:
            continue
        alive.discard(v)
        for u in adj[v]:
            if u in alive:
                deg[u] -= 1
                if deg[u] == t - 1:
                    queue.append(u)
    verts = tuple(v for v in G.vertices if v in alive)
    edges = tuple(e for e in G.edges if e.i in alive and e.j in alive)
    return UDGraph(G.points, G.r_sq, verts, edges)


def write_edges(G: UDGraph, path: str | Path) -> None:
    lines = [f"# r_sq {format_rational(G.r_sq)}\n"]
    lines += [f"{e.i} {e.j} {e.direction.dx} {e.direction.dy}\n" for e in G.edges]
    Path(path).write_text("".join(lines), encoding="utf-8")


def write_spectrum(spectrum: dict[Direction, int], path: str | Path) -> None:
    rows = ["dx,dy,count\n"] + [f"{d.dx},{d.dy},{c}\n" for d, c in sorted(spectrum.items())]
    Path(path).write_text("".join(rows), encoding="utf-8")
