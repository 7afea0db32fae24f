import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from udlab.exactgeom import Point
from udlab.pointsets import PointSet, grid
from udlab.udgraph import (
    Direction,
    UDGraph,
    canonical_direction,
    direction_spectrum,
    prune_min_degree,
    restrict_directions,
    top_directions,
    unit_pairs,
    unit_pairs_bruteforce,
    write_edges,
    write_spectrum,
)


def test_unit_pairs_examples():
    assert len(unit_pairs(grid(2), 1).edges) == 4
    G = unit_pairs(grid(5), 25)
    assert len(G.edges) == 8
    assert direction_spectrum(G) == {Direction(3, -4): 2, Direction(3, 4): 2, Direction(4, -3): 2, Direction(4, 3): 2}
    assert unit_pairs(PointSet([Point.of(0, 0)]), 7).edges == ()


def test_spectrum_examples():
    assert direction_spectrum(unit_pairs(grid(3), 1)) == {(0, 1): 6, (1, 0): 6}
    assert direction_spectrum(unit_pairs(grid(3), 3)) == {}


def test_top_directions_examples():
    spec = direction_spectrum(unit_pairs(grid(3), 1))
    assert top_directions(spec, 1) == {Direction(0, 1)}
    assert top_directions(spec, 0) == set()
    assert top_directions(spec, 9) == set(spec)


def test_restrict_examples():
    G = unit_pairs(grid(3), 1)
    assert len(restrict_directions(G, {Direction(1, 0)}).edges) == 6
    assert restrict_directions(G, set(direction_spectrum(G))).edges == G.edges
    assert restrict_directions(G, set()).edges == ()


def test_prune_examples():
    path = unit_pairs(PointSet(Point.of(x, 0) for x in range(3)), 1)
    core = prune_min_degree(path, 2)
    assert core.vertices == () and core.edges == ()
    G = unit_pairs(grid(3), 1)
    assert len(prune_min_degree(G, 2).vertices) == 9
    assert prune_min_degree(G, 0) is G


def _random_set(rng, n, side, den):
    return PointSet(Point(F(rng.randint(0, side * den), den), F(rng.randint(0, side * den), den)) for _ in range(n))


@pytest.mark.parametrize("seed", range(40))
def test_unit_pairs_matches_bruteforce(seed):
    rng = random.Random(seed)
    P = _random_set(rng, rng.randint(2, 120), rng.randint(3, 15), rng.choice([1, 2, 3]))
    groups = oracles.pairs_by_distance(P)
    for r_sq in list(groups)[:3] + [F(7, 3)]:
        got = {(e.i, e.j) for e in unit_pairs(P, r_sq).edges}
        assert got == set(groups.get(r_sq, ()))
        assert unit_pairs(P, r_sq).edges == unit_pairs_bruteforce(P, r_sq).edges


def test_irrational_scaled_radius_has_no_pairs():
    # after scaling by the common denominator 2, R = 4 * 3/8 is not an integer
    P = PointSet([Point.of(0, 0), Point.of(F(1, 2), 0)])
    assert unit_pairs(P, F(3, 8)).edges == ()


def test_edge_directions_recomputed():
    P = _random_set(random.Random(5), 150, 10, 2)
    r_sq = max(oracles.pairs_by_distance(P).items(), key=lambda kv: len(kv[1]))[0]
    for e in unit_pairs(P, r_sq).edges:
        assert e.i < e.j
        assert P[e.i].dist_sq(P[e.j]) == r_sq
        assert tuple(e.direction) == oracles.direction_of(P[e.i], P[e.j])


@given(st.tuples(st.fractions(max_denominator=9), st.fractions(max_denominator=9)).filter(lambda v: v != (0, 0)))
def test_canonical_direction_sign_invariant(v):
    d = canonical_direction(v)
    assert d == canonical_direction((-v[0], -v[1]))
    assert d.dx > 0 or (d.dx == 0 and d.dy > 0)


def test_restrict_union():
    G = unit_pairs(grid(9), 25)
    dirs = sorted(direction_spectrum(G))
    D1, D2 = set(dirs[:2]), set(dirs[1:])
    union = set(restrict_directions(G, D1 | D2).edges)
    assert union == set(restrict_directions(G, D1).edges) | set(restrict_directions(G, D2).edges)


def _prune_by_order(G: UDGraph, t: int, order):
    alive = set(G.vertices)
    changed = True
    while changed:
        changed = False
        for v in order:
            if v in alive and sum(1 for u in G.adjacency()[v] if u in alive) < t:
                alive.discard(v)
                changed = True
    return alive


@pytest.mark.parametrize("seed", range(5))
def test_prune_order_independent(seed):
    rng = random.Random(seed)
    P = _random_set(rng, 120, 9, 1)
    G = unit_pairs(P, 5)
    for t in (1, 2, 3):
        want = set(prune_min_degree(G, t).vertices)
        for _ in range(5):
            order = list(G.vertices)
            rng.shuffle(order)
            assert _prune_by_order(G, t, order) == want


def test_exports(tmp_path):
    G = unit_pairs(grid(3), 1)
    write_edges(G, tmp_path / "e.txt")
    lines = (tmp_path / "e.txt").read_text().splitlines()
    assert lines[0] == "# r_sq 1" and len(lines) == 13 and lines[1] == "0 1 0 1"
    write_spectrum(direction_spectrum(G), tmp_path / "s.csv")
    assert (tmp_path / "s.csv").read_text() == "dx,dy,count\n0,1,6\n1,0,6\n"
