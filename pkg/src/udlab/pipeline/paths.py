"""Self-intersecting three-edge paths inside a cell, and the centre-pair set H."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

from ..exactgeom import Point, arcs_cross, format_rational
from ..pointsets import PointSet
from .edges import GoodEdge, edge_arc


class OrientedArc(NamedTuple):
    """S indices at the entry and exit vertex of an edge, in path order."""

    enter: int
    leave: int


class P3Record(NamedTuple):
    q: tuple[int, int, int, int]
    centers: tuple[int, int, int]
    arcs: tuple[OrientedArc, OrientedArc, OrientedArc]
    edges: tuple[GoodEdge, GoodEdge, GoodEdge]


def _orient(e: GoodEdge, start: int) -> OrientedArc:
    if e.endpoints[0] == start:
        return OrientedArc(e.arc.i, e.arc.j)
    return OrientedArc(e.arc.j, e.arc.i)


def _other(e: GoodEdge, v: int) -> int:
    a, b = e.endpoints
    return b if v == a else a


def make_record(e1: GoodEdge, e2: GoodEdge, e3: GoodEdge, q: Sequence[int]) -> P3Record:
    """Record for the path q0-q1-q2-q3, stored in the orientation with q0 < q3."""
    q = tuple(q)
    if q[0] > q[3]:
        q = q[::-1]
        e1, e3 = e3, e1
    arcs = (_orient(e1, q[0]), _orient(e2, q[1]), _orient(e3, q[2]))
    return P3Record(q, (e1.center, e2.center, e3.center), arcs, (e1, e2, e3))


class CrossingCache:
    """Memoised :func:`arcs_cross` over good edges of one point set."""

    def __init__(self, P: PointSet, r_sq: Fraction):
        self.P = P
        self.r_sq = r_sq
        self._arcs = {}
        self._memo: dict[tuple, bool] = {}

    def arc(self, e: GoodEdge):
        a = self._arcs.get(e)
        if a is None:
            a = self._arcs[e] = edge_arc(self.P, self.r_sq, e)
        return a

    def __call__(self, e: GoodEdge, f: GoodEdge) -> bool:
        if e.center == f.center:
            return False  # same circle: arcs can overlap but never cross properly
        key = (e, f) if e < f else (f, e)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._memo[key] = arcs_cross(self.arc(e), self.arc(f))
        return hit


def count_self_intersecting_P3(
    edges: Sequence[GoodEdge], P: PointSet, r_sq: Fraction, crosses: CrossingCache | None = None
) -> list[P3Record]:
    """All paths e1, e2, e3 of good edges on four distinct points with e1, e3 crossing.

    Each middle edge x-y is visited once in its stored endpoint order and
    combined with edges at x and edges at y, so a path is never produced
    together with its reversal.
    """
    crosses = crosses or CrossingCache(P, r_sq)
    edges = sorted(set(edges))
    incident: dict[int, list[GoodEdge]] = {}
    for e in edges:
        for v in e.endpoints:
            incident.setdefault(v, []).append(e)
    out = []
    for mid in edges:
        x, y = mid.endpoints
        for ea in incident[x]:
            if y in ea.endpoints:
                continue
            sa = set(ea.endpoints)
            for eb in incident[y]:
                if x in eb.endpoints or sa & set(eb.endpoints):
                    continue
                if crosses(ea, eb):
                    out.append(make_record(ea, mid, eb, (_other(ea, x), x, y, _other(eb, y))))
    out.sort()
    return out


@dataclass
class HSet:
    """Ordered centre pairs (p1, p3) with the P3 records behind each."""

    multiplicity: Counter = field(default_factory=Counter)
    differences: Counter = field(default_factory=Counter)
    triple_differences: dict = field(default_factory=dict)

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return sorted(self.multiplicity)

    def __len__(self) -> int:
        return len(self.multiplicity)

    @property
    def max_multiplicity(self) -> int:
        return max(self.multiplicity.values(), default=0)

    @property
    def distinct_differences(self) -> int:
        return len(self.differences)

    @property
    def triple_conflicts(self) -> int:
        """Arc triples associated with more than one vector difference."""
        return sum(1 for v in self.triple_differences.values() if len(v) > 1)


def extract_H(p3s: Sequence[P3Record], P: PointSet) -> HSet:
    H = HSet()
    seen_pairs = set()
    for rec in p3s:
        p1, _, p3 = rec.centers
        H.multiplicity[(p1, p3)] += 1
        diff: Point = P[p1] - P[p3]
        if (p1, p3) not in seen_pairs:
            seen_pairs.add((p1, p3))
            H.differences[diff] += 1
        H.triple_differences.setdefault(rec.arcs, set()).add(diff)
    return H


def write_differences(H: HSet, path) -> None:
    rows = ["dx,dy,count\n"]
    rows += [f"{format_rational(d.x)},{format_rational(d.y)},{c}\n" for d, c in sorted(H.differences.items())]
    with open(path, "w", encoding="utf-8") as fh:
        fh.writelines(rows)
