"""Slow, direct reference computations used to check the library.

Nothing here calls the optimised code paths it is compared against: pair
searches are full O(n^2) scans, pruning repeats whole passes, paths are
enumerated by walking edges, and crossings go through QPoint intersections.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from fractions import Fraction

from udlab.exactgeom import Arc, Circle, QPoint, arcs_cross_reference, line_circle_intersection, point_on_arc


def pairs_at(points, r_sq):
    pts = list(points)
    out = []
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            dx = pts[j][0] - pts[i][0]
            dy = pts[j][1] - pts[i][1]
            if dx * dx + dy * dy == r_sq:
                out.append((i, j))
    return out


def direction_of(p, q):
    """Primitive integer vector along q - p, sign fixed so the first nonzero entry is positive."""
    dx, dy = Fraction(q[0] - p[0]), Fraction(q[1] - p[1])
    den = dx.denominator * dy.denominator
    a, b = int(dx * den), int(dy * den)
    g = math.gcd(a, b)
    a, b = a // g, b // g
    if a < 0 or (a == 0 and b < 0):
        a, b = -a, -b
    return (a, b)


def spectrum(points, pairs):
    return dict(Counter(direction_of(points[i], points[j]) for i, j in pairs))


def prune(vertices, pairs, t):
    """t-core by repeated full passes until nothing changes."""
    alive = set(vertices)
    while True:
        deg = {v: 0 for v in alive}
        for i, j in pairs:
            if i in alive and j in alive:
                deg[i] += 1
                deg[j] += 1
        drop = {v for v, k in deg.items() if k < t}
        if not drop:
            return alive
        alive -= drop


def pairs_by_distance(points):
    """Every unordered index pair grouped by squared distance (one full double loop)."""
    pts = list(points)
    L = math.lcm(1, *(c.denominator for p in pts for c in (Fraction(p[0]), Fraction(p[1]))))
    xs = [int(Fraction(p[0]) * L) for p in pts]
    ys = [int(Fraction(p[1]) * L) for p in pts]
    groups: dict[int, list] = {}
    for i in range(len(pts)):
        xi, yi = xs[i], ys[i]
        for j in range(i + 1, len(pts)):
            dx, dy = xs[j] - xi, ys[j] - yi
            groups.setdefault(dx * dx + dy * dy, []).append((i, j))
    return {Fraction(k, L * L): v for k, v in groups.items()}


def crosses(P, r_sq, e, f):
    """Proper crossing of two good edges; arcs on one circle never cross."""
    if e.center == f.center:
        return False
    a = Arc(Circle(P[e.center], r_sq), P[e.endpoints[0]], P[e.endpoints[1]])
    b = Arc(Circle(P[f.center], r_sq), P[f.endpoints[0]], P[f.endpoints[1]])
    return arcs_cross_reference(a, b)


def self_intersecting_paths(edges, P, r_sq):
    """Keys (q, edges) of all paths e1 e2 e3 on four distinct points with e1, e3 crossing.

    Walks every ordered start (e1 oriented q1 -> q2), then every e2 at q2
    and e3 at q3; a path and its reversal collapse to the key with q1 < q4.
    """
    at: dict[int, list] = {}
    for e in edges:
        for v in e.endpoints:
            at.setdefault(v, []).append(e)
    found = set()
    for e1 in edges:
        for q1, q2 in (e1.endpoints, e1.endpoints[::-1]):
            for e2 in at.get(q2, ()):
                if e2 == e1:
                    continue
                q3 = e2.endpoints[1] if e2.endpoints[0] == q2 else e2.endpoints[0]
                for e3 in at.get(q3, ()):
                    if e3 in (e1, e2):
                        continue
                    q4 = e3.endpoints[1] if e3.endpoints[0] == q3 else e3.endpoints[0]
                    if len({q1, q2, q3, q4}) < 4:
                        continue
                    if not crosses(P, r_sq, e1, e3):
                        continue
                    key = ((q1, q2, q3, q4), (e1, e2, e3))
                    if q1 > q4:
                        key = ((q4, q3, q2, q1), (e3, e2, e1))
                    found.add(key)
    return found


def good_edge_violations(P, r_sq, S, F, cells, e):
    """Reasons the edge fails the three good-edge conditions (empty when it is good)."""
    bad = []
    p = P[e.center]
    u, v = e.endpoints
    if P[u] != p + S[e.arc.i] or P[v] != p + S[e.arc.j]:
        bad.append("endpoints are not the arc translates")
    arc = Arc(Circle(p, r_sq), P[u], P[v])
    for s in S:
        q = p + s
        if q in (P[u], P[v]) or q not in P:
            continue
        if point_on_arc(arc, QPoint.of(q.x, q.y)):
            bad.append(f"translate {q} inside the arc")
    cu, cv = cells.cells[u], cells.cells[v]
    if cu is None or cu != cv or cu != e.cell:
        bad.append("endpoints not in one open cell")
    for line in F.lines:
        for q in line_circle_intersection(line, arc.circle):
            if point_on_arc(arc, q):
                bad.append(f"line {line.coefficients()} meets the arc")
    return bad


def difference_set(points):
    pts = list(points)
    return {(a[0] - b[0], a[1] - b[1]) for a in pts for b in pts}


def gap_elements(gap):
    out = set()
    for coeffs in itertools.product(*(range(l) for l in gap.lengths)):
        x, y = gap.base
        for a, g in zip(coeffs, gap.generators):
            x, y = x + a * g[0], y + a * g[1]
        out.add((x, y))
    return out


def box_factorizations(N, alpha):
    """Ordered pairs in {a + bi : 0 <= a, b < N} with product alpha, by full double loop."""
    ar, ai = alpha
    box = [(a, b) for a in range(N) for b in range(N)]
    return sum(1 for x in box for y in box if x[0] * y[0] - x[1] * y[1] == ar and x[0] * y[1] + x[1] * y[0] == ai)
