"""Good edges (translates of good arcs lying inside one cell) and good cells."""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple, Sequence

from ..exactgeom import Arc, Circle, as_rational, line_circle_intersection, point_on_arc
from ..partition import Cell, CellAssignment, LinePartition, circle_in_zero_set
from ..pointsets import PointSet
from ..udgraph import UDGraph
from .circle import DirectionCircle, GoodArc, good_arcs


class GoodEdge(NamedTuple):
    center: int
    arc: GoodArc
    endpoints: tuple[int, int]  # indices of center + S[arc.i], center + S[arc.j]
    cell: Cell


def edge_arc(P: PointSet, r_sq: Fraction, e: GoodEdge) -> Arc:
    return Arc(Circle(P[e.center], r_sq), P[e.endpoints[0]], P[e.endpoints[1]])


def _between(arc: GoodArc, m: int) -> range:
    """Offsets of S indices strictly inside the clockwise arc."""
    return range(1, (arc.j - arc.i) % m)


def find_good_edges(
    P: PointSet,
    G: UDGraph,
    dc: DirectionCircle,
    F: LinePartition,
    cells: CellAssignment,
    C1: int,
) -> list[GoodEdge]:
    """Translates p + a of good arcs meeting all three good-edge conditions.

    Condition (2) is decided on S indices: since S is sorted clockwise, the
    points of (p + S) strictly inside p + a are exactly p + S[k] for k between
    arc.i and arc.j. Condition (3) requires both endpoints in the same open
    cell and no point of any partition line on the open arc (touching counts).
    """
    if G.points != P or G.r_sq != dc.r_sq:
        raise ValueError("graph must be built on the same point set and r_sq")
    m = dc.m
    arcs = good_arcs(dc, C1) if m >= 2 else []
    r_sq = dc.r_sq
    out: list[GoodEdge] = []
    index = P.index
    for c, p in enumerate(P):
        circle = Circle(p, r_sq)
        if circle_in_zero_set(circle, F):
            continue
        hit = [index.get(p + s) for s in dc.S]
        cuts = None
        for a in arcs:
            u, v = hit[a.i], hit[a.j]
            if u is None or v is None:
                continue
            if any(hit[(a.i + k) % m] is not None for k in _between(a, m)):
                continue
            cu, cv = cells.cells[u], cells.cells[v]
            if cu is None or cu != cv:
                continue
            if cuts is None:
                cuts = [q for line in F.lines for q in line_circle_intersection(line, circle)]
            geo = Arc(circle, P[u], P[v])
            if any(point_on_arc(geo, q) for q in cuts):
                continue
            out.append(GoodEdge(c, a, (u, v), cu))
    return out


def edges_by_cell(edges: Sequence[GoodEdge]) -> dict[Cell, list[GoodEdge]]:
    out: dict[Cell, list[GoodEdge]] = {}
    for e in edges:
        out.setdefault(e.cell, []).append(e)
    return dict(sorted(out.items()))


def find_good_cells(edges: Sequence[GoodEdge], C2, n: int) -> set[Cell]:
    """Cells holding at least C2 * n^(2/3) good edges (compared exactly)."""
    C2 = as_rational(C2)
    counts: dict[Cell, int] = {}
    for e in edges:
        counts[e.cell] = counts.get(e.cell, 0) + 1
    # k >= C2 n^(2/3)  <=>  k^3 >= C2^3 n^2 for k, C2 >= 0
    bound = C2**3 * n * n
    return {c for c, k in counts.items() if k**3 >= bound}
